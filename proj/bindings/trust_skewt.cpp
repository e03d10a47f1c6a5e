#include <pybind11/pybind11.h>
PYBIND11_MODULE(trust_skewt, m) { m.doc() = "TrUST distribution and copula"; }
