// Catch2 amalgamated implementation, compiled once and linked into every
// test binary (supplies main()).
#include <catch2/catch_amalgamated.cpp>
