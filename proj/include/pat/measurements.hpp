#pragma once

#include <cmath>
#include <vector>

#include "pat/error.hpp"

namespace pat {

/// L x M matrix of pressure time samples, row s = one transducer's series.
/// data[s*m_samples + i] is sensor s at time t_i = (i+1)*dt.
class Measurements {
  public:
    Measurements() = default;
    Measurements(int l_sensors, int m_samples, double dt_us)
        : l_(l_sensors), m_(m_samples), dt_us_(dt_us),
          data_(static_cast<std::size_t>(l_sensors) * m_samples, 0.0) {
        require(l_ >= 1 && m_ >= 1, ErrorKind::invalid_argument, "measurements need L,M >= 1");
        require(dt_us_ > 0.0, ErrorKind::invalid_argument, "dt must be positive");
    }
    Measurements(int l_sensors, int m_samples, double dt_us, std::vector<double> data)
        : Measurements(l_sensors, m_samples, dt_us) {
        require(data.size() == data_.size(), ErrorKind::dimension_mismatch,
                "measurement data length does not match L*M");
        data_ = std::move(data);
    }

    int l_sensors() const { return l_; }
    int m_samples() const { return m_; }
    double dt_us() const { return dt_us_; }
    std::size_t size() const { return data_.size(); }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    double& at(int s, int i) { return data_[static_cast<std::size_t>(s) * m_ + i]; }
    double at(int s, int i) const { return data_[static_cast<std::size_t>(s) * m_ + i]; }

    bool all_finite() const {
        for (double v : data_)
            if (!std::isfinite(v)) return false;
        return true;
    }

  private:
    int l_ = 0;
    int m_ = 0;
    double dt_us_ = 0.0;
    std::vector<double> data_;
};

double dot(const Measurements& a, const Measurements& b);
double squared_norm(const Measurements& a);

} // namespace pat
