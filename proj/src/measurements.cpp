#include "pat/measurements.hpp"

namespace pat {

double dot(const Measurements& a, const Measurements& b) {
    require(a.l_sensors() == b.l_sensors() && a.m_samples() == b.m_samples(),
            ErrorKind::dimension_mismatch, "measurement shapes differ");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a.data()[i] * b.data()[i];
    return s;
}

double squared_norm(const Measurements& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a.data()[i] * a.data()[i];
    return s;
}

} // namespace pat
