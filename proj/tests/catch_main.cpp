// Catch2 amalgamated implementation, compiled once and linked by every
// test binary.
#include <catch2/catch_amalgamated.cpp>
