#include "homsa/sphere_grid.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "homsa/errors.hpp"

namespace homsa {

namespace {

constexpr std::uint64_t kMaxPoints = std::uint64_t(1) << 62;

std::uint64_t checked_pow(std::uint64_t base, std::size_t exp) {
    unsigned __int128 acc = 1;
    for (std::size_t i = 0; i < exp; ++i) {
        acc *= base;
        if (acc > kMaxPoints) throw resource_error("grid level too large: point count overflows");
    }
    return static_cast<std::uint64_t>(acc);
}

} // namespace

std::uint64_t GridSpec::side() const {
    std::size_t n = ambient_dim - 1;
    double m = std::ceil(std::ldexp(std::sqrt(static_cast<double>(n)), static_cast<int>(level)));
    if (!(m >= 1.0) || m > 9.0e15) throw resource_error("grid side length overflows");
    return static_cast<std::uint64_t>(m);
}

double GridSpec::radius() const { return std::ldexp(1.0, -static_cast<int>(level)); }

std::uint64_t GridSpec::point_count() const {
    std::uint64_t m = side();
    return checked_pow(2 * m + 1, ambient_dim) - checked_pow(2 * m - 1, ambient_dim);
}

GridSpec GridSpec::for_sphere(std::size_t ambient_dim, unsigned level) {
    if (ambient_dim < 2) throw input_error("grid needs ambient dimension >= 2");
    GridSpec spec{ambient_dim, level};
    spec.point_count(); // overflow check
    return spec;
}

namespace {

// Face-major layout: for axis a, coordinates j < a run in [-(M-1), M-1] and
// j > a in [-M, M], so every boundary integer point is owned by the face of
// its first extreme coordinate.
struct GridDecoder {
    explicit GridDecoder(const GridSpec& spec)
        : dim(spec.ambient_dim), m(spec.side()) {
        face_size.resize(dim);
        for (std::size_t a = 0; a < dim; ++a) {
            std::uint64_t sz = 1;
            for (std::size_t j = 0; j < dim; ++j) {
                if (j == a) continue;
                sz *= j < a ? 2 * m - 1 : 2 * m + 1;
            }
            face_size[a] = sz;
        }
    }

    // Decodes a global index into (axis, sign, free-coordinate digits).
    void decode(std::uint64_t index, std::size_t& axis, int& sign,
                std::vector<std::int64_t>& coords) const {
        std::size_t a = 0;
        while (index >= 2 * face_size[a]) {
            index -= 2 * face_size[a];
            ++a;
        }
        axis = a;
        sign = index < face_size[a] ? -1 : +1;
        if (sign > 0) index -= face_size[a];
        coords.assign(dim, 0);
        // Mixed radix, last free coordinate fastest.
        for (std::size_t rj = dim; rj-- > 0;) {
            if (rj == a) continue;
            std::uint64_t radix = rj < a ? 2 * m - 1 : 2 * m + 1;
            std::uint64_t digit = index % radix;
            index /= radix;
            std::int64_t low = rj < a ? -(static_cast<std::int64_t>(m) - 1)
                                      : -static_cast<std::int64_t>(m);
            coords[rj] = low + static_cast<std::int64_t>(digit);
        }
        coords[a] = sign * static_cast<std::int64_t>(m);
    }

    // Advances coords to the next point in the same face; returns false when
    // the face is exhausted.
    bool step_in_face(std::size_t axis, std::vector<std::int64_t>& coords) const {
        for (std::size_t rj = dim; rj-- > 0;) {
            if (rj == axis) continue;
            std::int64_t high = rj < axis ? static_cast<std::int64_t>(m) - 1
                                          : static_cast<std::int64_t>(m);
            std::int64_t low = -high;
            if (coords[rj] < high) {
                ++coords[rj];
                return true;
            }
            coords[rj] = low;
        }
        return false;
    }

    std::size_t dim;
    std::uint64_t m;
    std::vector<std::uint64_t> face_size;
};

void normalize(const std::vector<std::int64_t>& coords, std::span<double> out) {
    double norm2 = 0.0;
    for (std::size_t j = 0; j < coords.size(); ++j) {
        out[j] = static_cast<double>(coords[j]);
        norm2 += out[j] * out[j];
    }
    double inv = 1.0 / std::sqrt(norm2);
    for (std::size_t j = 0; j < coords.size(); ++j) out[j] *= inv;
}

} // namespace

void grid_point_at(const GridSpec& spec, std::uint64_t index, std::span<double> out) {
    if (index >= spec.point_count()) throw input_error("grid index out of range");
    GridDecoder dec(spec);
    std::size_t axis;
    int sign;
    std::vector<std::int64_t> coords;
    dec.decode(index, axis, sign, coords);
    normalize(coords, out);
}

void for_each_grid_point(const GridSpec& spec, std::uint64_t begin, std::uint64_t end,
                         const std::function<void(std::uint64_t, std::span<const double>)>& fn) {
    std::uint64_t total = spec.point_count();
    end = std::min(end, total);
    if (begin >= end) return;
    GridDecoder dec(spec);
    std::size_t axis;
    int sign;
    std::vector<std::int64_t> coords;
    dec.decode(begin, axis, sign, coords);
    std::vector<double> pt(spec.ambient_dim);
    std::uint64_t index = begin;
    // Face boundaries in index space, for odometer restarts.
    while (index < end) {
        normalize(coords, pt);
        fn(index, pt);
        ++index;
        if (index >= end) break;
        if (!dec.step_in_face(axis, coords)) dec.decode(index, axis, sign, coords);
    }
}

namespace {

// Deterministic standard normal from raw 64-bit state (Box-Muller).
class NormalSource {
public:
    explicit NormalSource(std::uint64_t seed) : rng_(seed) {}
    double next() {
        if (have_) {
            have_ = false;
            return spare_;
        }
        double u1 = uniform01();
        double u2 = uniform01();
        double r = std::sqrt(-2.0 * std::log(u1 + 1e-300));
        spare_ = r * std::sin(2.0 * M_PI * u2);
        have_ = true;
        return r * std::cos(2.0 * M_PI * u2);
    }

private:
    double uniform01() {
        return (static_cast<double>(rng_() >> 11) + 0.5) * 0x1.0p-53;
    }
    std::mt19937_64 rng_;
    bool have_ = false;
    double spare_ = 0.0;
};

} // namespace

double covering_radius_check(const GridSpec& spec, std::size_t samples, std::uint64_t seed) {
    if (samples < 1) throw input_error("covering check needs at least one sample");
    std::size_t dim = spec.ambient_dim;
    std::int64_t m = static_cast<std::int64_t>(spec.side());
    NormalSource normals(seed);
    std::vector<double> z(dim), cand(dim);
    std::vector<std::int64_t> center(dim), probe(dim);
    double worst = 0.0;
    constexpr std::int64_t window = 2;
    for (std::size_t s = 0; s < samples; ++s) {
        double norm2 = 0.0;
        for (std::size_t j = 0; j < dim; ++j) {
            z[j] = normals.next();
            norm2 += z[j] * z[j];
        }
        double inv = 1.0 / std::sqrt(norm2);
        for (auto& v : z) v *= inv;

        double best = 4.0;
        for (std::size_t a = 0; a < dim; ++a) {
            for (int sign : {-1, +1}) {
                double za = sign * z[a];
                if (za <= 0.0) continue;
                double t = static_cast<double>(m) / za; // scale onto the face plane
                for (std::size_t j = 0; j < dim; ++j) {
                    double y = std::clamp(t * z[j], -static_cast<double>(m),
                                          static_cast<double>(m));
                    center[j] = static_cast<std::int64_t>(std::llround(y));
                }
                center[a] = sign * m;
                // Window scan over the free coordinates.
                std::vector<std::int64_t> offset(dim, -window);
                offset[a] = 0;
                while (true) {
                    double d2 = 0.0;
                    double cnorm2 = 0.0;
                    for (std::size_t j = 0; j < dim; ++j) {
                        std::int64_t c = std::clamp(center[j] + offset[j], -m, m);
                        probe[j] = j == a ? sign * m : c;
                        cnorm2 += static_cast<double>(probe[j]) * static_cast<double>(probe[j]);
                    }
                    double cinv = 1.0 / std::sqrt(cnorm2);
                    for (std::size_t j = 0; j < dim; ++j) {
                        double diff = z[j] - probe[j] * cinv;
                        d2 += diff * diff;
                    }
                    best = std::min(best, d2);
                    // advance offset odometer
                    std::size_t rj = dim;
                    bool carried = false;
                    while (rj-- > 0) {
                        if (rj == a) continue;
                        if (offset[rj] < window) {
                            ++offset[rj];
                            carried = true;
                            break;
                        }
                        offset[rj] = -window;
                    }
                    if (!carried) break;
                }
            }
        }
        worst = std::max(worst, std::sqrt(best));
    }
    return worst;
}

} // namespace homsa
