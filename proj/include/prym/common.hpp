#pragma once
#include <stdexcept>
#include <string>
#include <cstdint>
#include <random>

namespace prym {

struct error : std::runtime_error {
    explicit error(const std::string& m) : std::runtime_error(m) {}
};

// Recoverable signal: a p-adic computation ran out of digits.  Callers are
// expected to retry at higher starting precision before giving up.
struct precision_loss : error {
    explicit precision_loss(const std::string& m) : error(m) {}
};

struct input_error : error {
    explicit input_error(const std::string& m) : error(m) {}
};

#define PRYM_CHECK(cond, msg) \
    do { if (!(cond)) throw ::prym::error(std::string("check failed: ") + (msg)); } while (0)

#define PRYM_INPUT(cond, msg) \
    do { if (!(cond)) throw ::prym::input_error(msg); } while (0)

// All randomized searches in the library draw from an explicitly seeded
// generator so that a run is reproducible bit-for-bit from its config.
using rng_t = std::mt19937_64;

inline rng_t make_rng(std::uint64_t seed) { return rng_t(seed); }

}  // namespace prym
