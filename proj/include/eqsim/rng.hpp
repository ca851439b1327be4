#ifndef EQSIM_RNG_HPP
#define EQSIM_RNG_HPP

#include <cstdint>
#include <random>

#include "eqsim/complex_matrix.hpp"

namespace eqsim {

// Deterministic random stream. Gaussians are produced by an explicit
// Box-Muller transform on top of mt19937_64 so that sequences are
// bit-identical across standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    // uniform in [0, 1)
    double uniform() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // standard normal
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform();  // (0, 1]
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * 3.141592653589793238462643383279502884 * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

    // complex normal with E|z|^2 = 1
    cplx complex_normal() {
        const double re = normal();
        const double im = normal();
        return {re * 0.7071067811865475244, im * 0.7071067811865475244};
    }

private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// Independent sub-stream seed, splitmix64 finalizer over (base, stream).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

// Haar-random unit vector (normalized complex Gaussian).
cvec haar_vector(int dim, std::uint64_t seed);

}  // namespace eqsim

#endif
