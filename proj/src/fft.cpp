#include "vnlw/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>
#include <vector>

namespace vnlw {

namespace detail {

namespace {

class PlanRegistry {
public:
    ~PlanRegistry()
    {
        for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
    }

    fftw_plan get(std::size_t n, int sign)
    {
        std::lock_guard lock(mutex_);
        const auto key = std::make_pair(n, sign);
        if (auto it = plans_.find(key); it != plans_.end()) return it->second;

        // Planning only needs a buffer of the right shape; FFTW_ESTIMATE leaves it untouched.
        std::vector<Complex> scratch(n * n);
        auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
        const int dim = static_cast<int>(n);
        fftw_plan plan = fftw_plan_dft_2d(dim, dim, buf, buf, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                                          FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (plan == nullptr) throw std::runtime_error("fftw: failed to create plan");
        plans_.emplace(key, plan);
        return plan;
    }

private:
    std::mutex mutex_;
    std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

PlanRegistry& registry()
{
    static PlanRegistry instance;
    return instance;
}

}  // namespace

void fft2_inplace(std::span<Complex> data, std::size_t n, int sign)
{
    if (data.size() != n * n) throw std::invalid_argument("fft2_inplace: buffer size mismatch");
    fftw_plan plan = registry().get(n, sign);
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(plan, buf, buf);
}

}  // namespace detail

namespace {

std::vector<Complex> complex_inverse(const SpectralField& spectrum)
{
    const Grid& g = spectrum.grid();
    std::vector<Complex> buf(spectrum.coefficients().begin(), spectrum.coefficients().end());
    detail::fft2_inplace(buf, g.n(), +1);
    const double scale = 1.0 / static_cast<double>(g.n());
    for (Complex& c : buf) c *= scale;
    return buf;
}

}  // namespace

SpectralField forward_transform(const RealField& f)
{
    if (!f.all_finite()) throw NonFiniteError("forward_transform: non-finite sample");
    const Grid& g = f.grid();
    std::vector<Complex> buf(g.size());
    std::copy(f.samples().begin(), f.samples().end(), buf.begin());
    detail::fft2_inplace(buf, g.n(), -1);
    const double scale = 1.0 / static_cast<double>(g.n());
    for (Complex& c : buf) c *= scale;
    return SpectralField(g, std::move(buf));
}

RealField inverse_transform(const SpectralField& spectrum)
{
    std::vector<Complex> buf = complex_inverse(spectrum);
    std::vector<double> samples(buf.size());
    std::transform(buf.begin(), buf.end(), samples.begin(), [](const Complex& c) { return c.real(); });
    return RealField(spectrum.grid(), std::move(samples));
}

CheckedInverse inverse_transform_checked(const SpectralField& spectrum)
{
    std::vector<Complex> buf = complex_inverse(spectrum);
    std::vector<double> samples(buf.size());
    double worst = 0.0;
    for (std::size_t k = 0; k < buf.size(); ++k) {
        samples[k] = buf[k].real();
        worst = std::max(worst, std::abs(buf[k].imag()));
    }
    return {RealField(spectrum.grid(), std::move(samples)), worst};
}

double imaginary_residue(const SpectralField& spectrum)
{
    double worst = 0.0;
    for (const Complex& c : complex_inverse(spectrum)) worst = std::max(worst, std::abs(c.imag()));
    return worst;
}

}  // namespace vnlw
