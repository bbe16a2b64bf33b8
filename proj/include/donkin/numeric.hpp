#pragma once

#include <boost/container/small_vector.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace donkin {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::rational<BigInt>;

// Integer coordinate vector of a weight in the fundamental-weight basis.
// Inline storage covers every system rank used in practice (<= 8).
using Coords = boost::container::small_vector<std::int64_t, 8>;

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct CapExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct VerificationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InternalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline BigInt exact_div(const BigInt& num, const BigInt& den, const char* where) {
    if (den == 0)
        throw InternalError(std::string("exact_div by zero in ") + where);
    BigInt q = num / den;
    if (q * den != num)
        throw InternalError(std::string("inexact division in ") + where);
    return q;
}

inline std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t h = 1469598103934665603ULL) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 1099511628211ULL;
    }
    return h;
}

struct CoordsHash {
    std::size_t operator()(const Coords& c) const {
        return static_cast<std::size_t>(fnv1a(c.data(), c.size() * sizeof(std::int64_t)));
    }
};

}  // namespace donkin
