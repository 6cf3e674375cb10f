#include "qpefl/qpefl.hpp"
int main() { return 0; }
