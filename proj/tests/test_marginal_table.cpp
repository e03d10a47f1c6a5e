#include <doctest.h>
TEST_SUITE_BEGIN("marginal");
TEST_SUITE_END();
