#include "pat/image.hpp"

#include <algorithm>

namespace pat {

double dot(const Image& a, const Image& b) {
    require_same_grid(a, b);
    double s = 0.0;
    const double* pa = a.data();
    const double* pb = b.data();
    for (std::size_t i = 0; i < a.size(); ++i) s += pa[i] * pb[i];
    return s;
}

double squared_norm(const Image& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * a[i];
    return s;
}

double norm(const Image& a) { return std::sqrt(squared_norm(a)); }

void axpy(double alpha, const Image& x, Image& y) {
    require_same_grid(x, y);
    double* py = y.data();
    const double* px = x.data();
    for (std::size_t i = 0; i < x.size(); ++i) py[i] += alpha * px[i];
}

void scale(Image& x, double alpha) {
    double* p = x.data();
    for (std::size_t i = 0; i < x.size(); ++i) p[i] *= alpha;
}

Image lincomb(double a, const Image& x, double b, const Image& y) {
    require_same_grid(x, y);
    Image out(x.grid());
    double* po = out.data();
    const double* px = x.data();
    const double* py = y.data();
    for (std::size_t i = 0; i < x.size(); ++i) po[i] = a * px[i] + b * py[i];
    return out;
}

double min_value(const Image& a) { return *std::min_element(a.data(), a.data() + a.size()); }
double max_value(const Image& a) { return *std::max_element(a.data(), a.data() + a.size()); }

} // namespace pat
