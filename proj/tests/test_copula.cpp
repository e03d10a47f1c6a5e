#include <doctest.h>
TEST_SUITE_BEGIN("copula");
TEST_SUITE_END();
