#include "vnlw/randomization.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "vnlw/fft.hpp"
#include "vnlw/seeding.hpp"

namespace vnlw {

namespace {

double tent_1d(double x) { return std::max(0.0, 1.0 - std::abs(x)); }

// The two cube centres along one axis whose tent can be nonzero at x.
std::pair<long, long> touching(double x)
{
    const auto lo = static_cast<long>(std::floor(x));
    return {lo, lo + 1};
}

std::uint64_t encode(long v) { return static_cast<std::uint64_t>(v) ^ 0x5851F42D4C957F2DULL; }

}  // namespace

double tent_bump(const Frequency& xi) { return tent_1d(xi.x) * tent_1d(xi.y); }

double bump_partition_sum(const Frequency& xi)
{
    const auto [x0, x1] = touching(xi.x);
    const auto [y0, y1] = touching(xi.y);
    double sum = 0.0;
    for (long nx : {x0, x1}) {
        for (long ny : {y0, y1}) {
            sum += tent_bump({xi.x - static_cast<double>(nx), xi.y - static_cast<double>(ny)});
        }
    }
    return sum;
}

bool in_index_set(const CubeIndex& n) { return n.x > 0 || (n.x == 0 && n.y > 0); }

std::map<CubeIndex, SpectralField> unit_decompose(const RealField& f)
{
    const SpectralField spectrum = forward_transform(f);
    const Grid& g = f.grid();
    std::map<CubeIndex, SpectralField> pieces;
    for (std::size_t i = 0; i < g.n(); ++i) {
        for (std::size_t j = 0; j < g.n(); ++j) {
            const Complex value = spectrum(i, j);
            if (value == Complex(0.0, 0.0)) continue;
            const Frequency xi = g.frequency(i, j);
            const auto [x0, x1] = touching(xi.x);
            const auto [y0, y1] = touching(xi.y);
            for (long nx : {x0, x1}) {
                for (long ny : {y0, y1}) {
                    const double w = tent_bump({xi.x - static_cast<double>(nx), xi.y - static_cast<double>(ny)});
                    if (w == 0.0) continue;
                    auto it = pieces.try_emplace(CubeIndex{nx, ny}, g).first;
                    it->second.at(i, j) = w * value;
                }
            }
        }
    }
    return pieces;
}

double decomposition_energy(const RealField& f)
{
    const SpectralField spectrum = forward_transform(f);
    const Grid& g = f.grid();
    double sum = 0.0;
    for (std::size_t i = 0; i < g.n(); ++i) {
        for (std::size_t j = 0; j < g.n(); ++j) {
            const Frequency xi = g.frequency(i, j);
            const auto [x0, x1] = touching(xi.x);
            const auto [y0, y1] = touching(xi.y);
            double weight = 0.0;
            for (long nx : {x0, x1}) {
                for (long ny : {y0, y1}) {
                    const double w =
                        tent_bump({xi.x - static_cast<double>(nx), xi.y - static_cast<double>(ny)});
                    weight += w * w;
                }
            }
            sum += weight * std::norm(spectrum(i, j));
        }
    }
    return sum * g.cell_area();
}

std::string to_string(DistributionKind kind)
{
    return kind == DistributionKind::Gaussian ? "gaussian" : "bernoulli";
}

DistributionKind parse_distribution(const std::string& text)
{
    if (text == "gaussian") return DistributionKind::Gaussian;
    if (text == "bernoulli") return DistributionKind::Bernoulli;
    throw std::invalid_argument("unknown distribution kind '" + text + "'");
}

Complex CoefficientDraw::coefficient(const CubeIndex& n, int j) const
{
    if (j != 0 && j != 1) throw std::invalid_argument("coefficient: component index must be 0 or 1");
    const bool conjugate = !(n == CubeIndex{}) && !in_index_set(n);
    const CubeIndex canonical = conjugate ? -n : n;
    const std::uint64_t key = mix64(mix64(mix64(seed_) ^ encode(canonical.x)) ^ encode(canonical.y)) ^
                              mix64(static_cast<std::uint64_t>(j) + 1);
    CounterStream stream(key);
    Complex g;
    if (canonical == CubeIndex{}) {
        g = kind_ == DistributionKind::Gaussian ? Complex(stream.normal(), 0.0)
                                                : Complex((stream.next() >> 63) ? 1.0 : -1.0, 0.0);
    } else if (kind_ == DistributionKind::Gaussian) {
        const double re = stream.normal();
        const double im = stream.normal();
        g = Complex(re, im) * std::sqrt(0.5);
    } else {
        const double re = (stream.next() >> 63) ? 1.0 : -1.0;
        const double im = (stream.next() >> 63) ? 1.0 : -1.0;
        g = Complex(re, im) * std::sqrt(0.5);
    }
    return conjugate ? std::conj(g) : g;
}

std::string CoefficientDraw::manifest() const
{
    std::ostringstream out;
    out << "seed=" << seed_ << "\nkind=" << to_string(kind_) << "\n";
    return out.str();
}

CoefficientDraw CoefficientDraw::from_manifest(const std::string& text)
{
    std::istringstream in(text);
    std::string line;
    std::optional<std::uint64_t> seed;
    std::optional<DistributionKind> kind;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("draw manifest: malformed line '" + line + "'");
        const std::string key = line.substr(0, eq);
        const std::string value = line.substr(eq + 1);
        if (key == "seed") {
            seed = std::stoull(value);
        } else if (key == "kind") {
            kind = parse_distribution(value);
        } else {
            throw std::invalid_argument("draw manifest: unknown key '" + key + "'");
        }
    }
    if (!seed || !kind) throw std::invalid_argument("draw manifest: seed and kind are required");
    return {*kind, *seed};
}

std::uint64_t digest(const StatePair& data)
{
    std::uint64_t h = 0xCBF29CE484222325ULL;
    auto feed = [&h](std::span<const double> values) {
        for (double v : values) {
            unsigned char bytes[sizeof(double)];
            std::memcpy(bytes, &v, sizeof(double));
            for (unsigned char b : bytes) {
                h ^= b;
                h *= 0x100000001B3ULL;
            }
        }
    };
    feed(data.position.samples());
    feed(data.velocity.samples());
    return h;
}

namespace {

SpectralField randomize_component(const SpectralField& spectrum, const CoefficientSource& source, int j)
{
    const Grid& g = spectrum.grid();
    const std::size_t n = g.n();
    // Cube centres reachable from the lattice: |n_i| <= ceil(nyquist) + 1.
    const long reach = static_cast<long>(std::ceil(g.nyquist())) + 1;
    const long width = 2 * reach + 1;
    std::vector<Complex> table(static_cast<std::size_t>(width * width));
    for (long nx = -reach; nx <= reach; ++nx) {
        for (long ny = -reach; ny <= reach; ++ny) {
            table[static_cast<std::size_t>((nx + reach) * width + (ny + reach))] = source({nx, ny}, j);
        }
    }

    std::vector<Complex> symbol(g.size());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            const Frequency xi = g.frequency(i, k);
            const auto [x0, x1] = touching(xi.x);
            const auto [y0, y1] = touching(xi.y);
            Complex m(0.0, 0.0);
            for (long nx : {x0, x1}) {
                for (long ny : {y0, y1}) {
                    const double w =
                        tent_bump({xi.x - static_cast<double>(nx), xi.y - static_cast<double>(ny)});
                    if (w == 0.0) continue;
                    m += w * table[static_cast<std::size_t>((nx + reach) * width + (ny + reach))];
                }
            }
            symbol[g.index(i, k)] = m;
        }
    }

    SpectralField out(g);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            const Complex m = symbol[g.index(i, k)];
            const Complex partner = std::conj(symbol[g.index(g.mirror(i), g.mirror(k))]);
            out.at(i, k) = 0.5 * (m + partner) * spectrum(i, k);
        }
    }
    return out;
}

}  // namespace

RandomizedPair randomize_pair(const StatePair& data, const CoefficientSource& source)
{
    auto u0 = inverse_transform_checked(randomize_component(forward_transform(data.position), source, 0));
    auto u1 = inverse_transform_checked(randomize_component(forward_transform(data.velocity), source, 1));
    return RandomizedPair{StatePair(std::move(u0.field), std::move(u1.field)), 0, DistributionKind::Gaussian,
                          digest(data), std::max(u0.imaginary_residue, u1.imaginary_residue)};
}

RandomizedPair randomize_pair(const StatePair& data, const CoefficientDraw& draw)
{
    RandomizedPair out =
        randomize_pair(data, [&draw](const CubeIndex& n, int j) { return draw.coefficient(n, j); });
    out.seed = draw.seed();
    out.kind = draw.kind();
    return out;
}

RandomizedPair deterministic_pair(const StatePair& data) { return RandomizedPair{data, 0, {}, digest(data), 0.0}; }

SubgaussianReport verify_subgaussian_moment(std::span<const double> c, int p, DistributionKind kind,
                                            std::size_t ensemble, std::uint64_t seed)
{
    if (p < 2 || p > 12 || p % 2 != 0) throw std::invalid_argument("verify_subgaussian_moment: p must be even in [2, 12]");
    if (ensemble < 1000) throw std::invalid_argument("verify_subgaussian_moment: ensemble must be >= 1000");
    if (c.empty()) throw std::invalid_argument("verify_subgaussian_moment: empty sequence");

    double l2 = 0.0;
    for (double v : c) l2 += v * v;
    l2 = std::sqrt(l2);

    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t r = 0; r < ensemble; ++r) {
        const CoefficientDraw draw(kind, split_seed(seed, r));
        Complex s(0.0, 0.0);
        for (std::size_t k = 0; k < c.size(); ++k) {
            s += draw.coefficient({static_cast<long>(k) + 1, 0}, 0) * c[k];
        }
        const double moment = std::pow(std::abs(s), p);
        sum += moment;
        sum_sq += moment * moment;
    }
    const auto count = static_cast<double>(ensemble);
    const double mean = sum / count;
    const double variance = std::max(0.0, (sum_sq / count - mean * mean) * count / (count - 1.0));
    const double se_mean = std::sqrt(variance / count);

    SubgaussianReport report;
    report.p = p;
    report.ensemble = ensemble;
    report.empirical_norm = std::pow(mean, 1.0 / p);
    // delta method for mean^{1/p}
    report.standard_error = mean > 0.0 ? report.empirical_norm / (p * mean) * se_mean : 0.0;
    report.l2_norm = l2;
    report.ratio = l2 > 0.0 ? report.empirical_norm / (std::sqrt(static_cast<double>(p)) * l2) : 0.0;
    return report;
}

}  // namespace vnlw
