#include "eqsim/rng.hpp"

#include <stdexcept>

namespace eqsim {

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    std::uint64_t z = base + 0x9E3779B97F4A7C15ull * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

cvec haar_vector(int dim, std::uint64_t seed) {
    if (dim < 1) throw std::invalid_argument("haar_vector: dim must be positive");
    Rng rng(seed);
    cvec v(dim);
    for (auto& x : v) x = rng.complex_normal();
    const double n = vnorm(v);
    for (auto& x : v) x /= n;
    return v;
}

}  // namespace eqsim
