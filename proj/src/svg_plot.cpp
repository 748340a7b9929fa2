#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "dgstab/plot.hpp"
#include "dgstab/random.hpp"

namespace dgstab {

std::vector<Complex> eigen_cloud(const Query& q, int samples) {
    std::vector<Complex> out;
    const SeedStream stream(q.seed);
    SpectrumWorkspace ws;
    for (int i = 0; i < samples; ++i) {
        Rng rng = stream.child(static_cast<std::uint64_t>(i)).engine();
        const Matrix G = sample(q.cls, rng);
        const Spectrum& s = ws.compute(apply(q.op, G, q.A));
        out.insert(out.end(), s.begin(), s.end());
    }
    return out;
}

namespace {

constexpr double kSize = 480.0;
constexpr double kPad = 24.0;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

struct View {
    double lo_x, hi_x, lo_y, hi_y;

    [[nodiscard]] double px(double x) const { return kPad + (x - lo_x) / (hi_x - lo_x) * (kSize - 2 * kPad); }
    [[nodiscard]] double py(double y) const { return kSize - kPad - (y - lo_y) / (hi_y - lo_y) * (kSize - 2 * kPad); }
};

View fit(const std::vector<Complex>& pts) {
    double r = 1.5;
    for (const Complex& p : pts) {
        if (std::isfinite(p.real()) && std::isfinite(p.imag())) r = std::max({r, std::abs(p.real()), std::abs(p.imag())});
    }
    r *= 1.1;
    return {-r, r, -r, r};
}

void line(std::ostringstream& o, const View& v, double x0, double y0, double x1, double y1, const char* style) {
    o << "<line x1=\"" << fmt(v.px(x0)) << "\" y1=\"" << fmt(v.py(y0)) << "\" x2=\"" << fmt(v.px(x1)) << "\" y2=\""
      << fmt(v.py(y1)) << "\" " << style << "/>\n";
}

void boundary(std::ostringstream& o, const View& v, const Region& R) {
    const char* edge = "stroke=\"#c0392b\" stroke-width=\"1.5\"";
    const char* dashed = "stroke=\"#c0392b\" stroke-width=\"1.5\" stroke-dasharray=\"5,4\"";
    switch (R.kind()) {
        case RegionKind::RightHalfPlane:
        case RegionKind::LeftHalfPlane: line(o, v, 0, v.lo_y, 0, v.hi_y, edge); break;
        case RegionKind::NonzeroRealPart: line(o, v, 0, v.lo_y, 0, v.hi_y, dashed); break;
        case RegionKind::RealAxis: line(o, v, v.lo_x, 0, v.hi_x, 0, edge); break;
        case RegionKind::PositiveRealRay: line(o, v, 0, 0, v.hi_x, 0, edge); break;
        case RegionKind::UnitDisk: {
            const double rx = v.px(1) - v.px(0);
            o << "<circle cx=\"" << fmt(v.px(0)) << "\" cy=\"" << fmt(v.py(0)) << "\" r=\"" << fmt(rx)
              << "\" fill=\"none\" " << edge << "/>\n";
            break;
        }
        case RegionKind::PuncturedPlane:
            o << "<circle cx=\"" << fmt(v.px(0)) << "\" cy=\"" << fmt(v.py(0)) << "\" r=\"3\" fill=\"none\" " << edge
              << "/>\n";
            break;
        case RegionKind::Sector: {
            const double a = R.half_angle();
            const double len = 2.0 * v.hi_x;
            line(o, v, 0, 0, len * std::cos(a), len * std::sin(a), edge);
            line(o, v, 0, 0, len * std::cos(a), -len * std::sin(a), edge);
            break;
        }
        case RegionKind::Hill: {
            // Sign changes of f on a grid.
            constexpr int kGrid = 160;
            const double dx = (v.hi_x - v.lo_x) / kGrid;
            const double dy = (v.hi_y - v.lo_y) / kGrid;
            const HillCoefficients& c = *R.hill_coefficients();
            for (int i = 0; i < kGrid; ++i) {
                for (int j = 0; j < kGrid; ++j) {
                    const double x = v.lo_x + i * dx, y = v.lo_y + j * dy;
                    const bool s = c.evaluate({x, y}) > 0;
                    if (s != (c.evaluate({x + dx, y}) > 0) || s != (c.evaluate({x, y + dy}) > 0)) {
                        o << "<rect x=\"" << fmt(v.px(x)) << "\" y=\"" << fmt(v.py(y)) << "\" width=\"1.5\" "
                          << "height=\"1.5\" fill=\"#c0392b\"/>\n";
                    }
                }
            }
            break;
        }
    }
}

}  // namespace

std::string render_svg(const std::vector<Complex>& points, const Region& region) {
    const View v = fit(points);
    std::ostringstream o;
    o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSize << "\" height=\"" << kSize
      << "\" viewBox=\"0 0 " << kSize << " " << kSize << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    const char* axis = "stroke=\"#999\" stroke-width=\"0.75\"";
    line(o, v, v.lo_x, 0, v.hi_x, 0, axis);
    line(o, v, 0, v.lo_y, 0, v.hi_y, axis);
    boundary(o, v, region);
    o << "<g fill=\"#1f4e79\" fill-opacity=\"0.6\">\n";
    for (const Complex& p : points) {
        if (!std::isfinite(p.real()) || !std::isfinite(p.imag())) continue;
        o << "<circle cx=\"" << fmt(v.px(p.real())) << "\" cy=\"" << fmt(v.py(p.imag())) << "\" r=\"2\"/>\n";
    }
    o << "</g>\n"
      << "<text x=\"" << kPad << "\" y=\"16\" font-family=\"sans-serif\" font-size=\"12\">" << region.name() << ", "
      << points.size() << " eigenvalues</text>\n"
      << "</svg>\n";
    return o.str();
}

}  // namespace dgstab
