#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "vnlw/field.hpp"

namespace vnlw {

/// Centre n of a unit frequency cube n + [-1, 1]^2 (physical radians).
struct CubeIndex {
    long x = 0;
    long y = 0;

    auto operator<=>(const CubeIndex&) const = default;
    CubeIndex operator-() const { return {-x, -y}; }
};

/// Tensor tent psi(xi) = prod_i max(0, 1 - |xi_i|). Its integer translates sum to one.
double tent_bump(const Frequency& xi);

/// sum_n psi(xi - n) over the (at most four) cubes that touch xi.
double bump_partition_sum(const Frequency& xi);

/// Canonical index set {n_1 > 0} U {n_1 = 0, n_2 > 0}.
bool in_index_set(const CubeIndex& n);

/// f = sum_n psi(D - n) f, keyed by cube. Pieces of a real f are complex-valued in
/// physical space, so each is returned as its spectrum. Only cubes meeting the
/// support of f-hat are materialised; memory is one spectrum per cube.
std::map<CubeIndex, SpectralField> unit_decompose(const RealField& f);

/// sum_n ||psi(D - n) f||_{L^2}^2 evaluated on the Fourier side without materialising pieces.
double decomposition_energy(const RealField& f);

enum class DistributionKind { Gaussian, Bernoulli };

std::string to_string(DistributionKind kind);
/// Accepts "gaussian" and "bernoulli"; throws std::invalid_argument otherwise.
DistributionKind parse_distribution(const std::string& text);

/// Random family {g_{n,j}} with g_{-n,j} = conj(g_{n,j}), g_{0,j} real and E|g|^2 = 1.
///
/// Coefficients are never stored: each is a pure function of (seed, canonical n, j)
/// through a counter-based stream, so any subset can be regenerated independently.
class CoefficientDraw {
public:
    CoefficientDraw(DistributionKind kind, std::uint64_t seed) : kind_(kind), seed_(seed) {}

    Complex coefficient(const CubeIndex& n, int j) const;

    DistributionKind kind() const { return kind_; }
    std::uint64_t seed() const { return seed_; }

    /// Textual manifest "seed=<u64>\nkind=<name>\n".
    std::string manifest() const;
    static CoefficientDraw from_manifest(const std::string& text);

private:
    DistributionKind kind_;
    std::uint64_t seed_;
};

/// draw_coefficients(kind, seed).
inline CoefficientDraw draw_coefficients(DistributionKind kind, std::uint64_t seed) { return {kind, seed}; }

/// FNV-1a digest of the raw sample bytes of a pair.
std::uint64_t digest(const StatePair& data);

struct RandomizedPair {
    StatePair data;
    std::uint64_t seed = 0;
    DistributionKind kind = DistributionKind::Gaussian;
    std::uint64_t source_digest = 0;
    /// Largest imaginary residue of the two inverse transforms.
    double imaginary_residue = 0.0;
};

/// u_j^omega = sum_n g_{n,j} psi(D - n) u_j, assembled as one multiplier per component.
/// At self-conjugate lattice points (Nyquist rows/columns) the multiplier is
/// replaced by its Hermitian part so the output stays real.
RandomizedPair randomize_pair(const StatePair& data, const CoefficientDraw& draw);

/// Coefficient g_{n,j} for cube n and component j; should satisfy g_{-n} = conj(g_n).
using CoefficientSource = std::function<Complex(const CubeIndex&, int)>;

/// Same construction with arbitrary coefficients (all ones reproduces the data).
RandomizedPair randomize_pair(const StatePair& data, const CoefficientSource& source);

/// Wrap deterministic data as a pair with no randomization applied.
RandomizedPair deterministic_pair(const StatePair& data);

/// Monte Carlo estimate of ||sum_n g_n c_n||_{L^p(Omega)} against sqrt(p) ||c||_{l^2}.
struct SubgaussianReport {
    int p = 2;
    std::size_t ensemble = 0;
    double empirical_norm = 0.0;
    double standard_error = 0.0;
    double l2_norm = 0.0;
    /// empirical_norm / (sqrt(p) * l2_norm)
    double ratio = 0.0;
};

/// c_k is attached to the cube (k + 1, 0), so the g's are independent.
/// Requires even 2 <= p <= 12 and ensemble >= 1000.
SubgaussianReport verify_subgaussian_moment(std::span<const double> c, int p, DistributionKind kind,
                                            std::size_t ensemble, std::uint64_t seed);

}  // namespace vnlw
