#pragma once

#include <stdexcept>
#include <string>

namespace dps {

// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct DimensionMismatch : Error {
    explicit DimensionMismatch(const std::string& what) : Error(what) {}
};

struct NotHermitian : Error {
    explicit NotHermitian(const std::string& what) : Error(what) {}
};

struct NoConvergence : Error {
    explicit NoConvergence(const std::string& what) : Error(what) {}
};

struct EvenDimension : Error {
    explicit EvenDimension(const std::string& what) : Error(what) {}
};

struct NonPositiveNome : Error {
    explicit NonPositiveNome(const std::string& what) : Error(what) {}
};

struct ZeroWeight : Error {
    explicit ZeroWeight(const std::string& what) : Error(what) {}
};

struct NegativeMass : Error {
    explicit NegativeMass(const std::string& what) : Error(what) {}
};

struct NotNormalized : Error {
    explicit NotNormalized(const std::string& what) : Error(what) {}
};

struct IndexOutOfRange : Error {
    explicit IndexOutOfRange(const std::string& what) : Error(what) {}
};

struct InvalidParams : Error {
    explicit InvalidParams(const std::string& what) : Error(what) {}
};

struct TooFewPeaks : Error {
    explicit TooFewPeaks(const std::string& what) : Error(what) {}
};

} // namespace dps
