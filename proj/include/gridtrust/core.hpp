#pragma once

#include <array>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>

namespace gridtrust {

using SimTime = double;
using NodeId = std::uint32_t;
using TxId = std::uint64_t;
using DomainId = std::string;
using PrincipalId = std::string;

// Both QoS quality estimates and domain security attributes are 6-vectors.
inline constexpr std::size_t kQosParamCount = 6;
inline constexpr std::size_t kSecurityAttrCount = 6;

using ParamVector = std::array<double, kQosParamCount>;
using AttrVector = std::array<double, kSecurityAttrCount>;

inline constexpr std::array<std::string_view, kQosParamCount> kQosParamNames = {
    "delay", "response_time", "accuracy", "cost", "availability", "jitter"};

enum class Errc {
  AccessDenied,
  NotFound,
  DuplicateDomain,
  InvalidProfile,
  DuplicateFeedback,
  DegenerateDemand,
  NoProviders,
  InvalidWeights,
  InvalidCriteria,
  TimeReversal,
  UnknownSubject,
  EmptyRing,
  ParseError,
  ValidationFailed,
  IoError,
  SchemaMismatch,
};

inline std::string_view errc_name(Errc c) {
  switch (c) {
    case Errc::AccessDenied: return "AccessDenied";
    case Errc::NotFound: return "NotFound";
    case Errc::DuplicateDomain: return "DuplicateDomain";
    case Errc::InvalidProfile: return "InvalidProfile";
    case Errc::DuplicateFeedback: return "DuplicateFeedback";
    case Errc::DegenerateDemand: return "DegenerateDemand";
    case Errc::NoProviders: return "NoProviders";
    case Errc::InvalidWeights: return "InvalidWeights";
    case Errc::InvalidCriteria: return "InvalidCriteria";
    case Errc::TimeReversal: return "TimeReversal";
    case Errc::UnknownSubject: return "UnknownSubject";
    case Errc::EmptyRing: return "EmptyRing";
    case Errc::ParseError: return "ParseError";
    case Errc::ValidationFailed: return "ValidationFailed";
    case Errc::IoError: return "IoError";
    case Errc::SchemaMismatch: return "SchemaMismatch";
  }
  return "Unknown";
}

class GridError : public std::runtime_error {
 public:
  GridError(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

inline double clamp01(double x) {
  if (x < 0.0) return 0.0;
  if (x > 1.0) return 1.0;
  return x;
}

// Canonical float formatting: 12 significant digits, locale-independent.
// Every number that reaches a journal, trace, or report goes through here so
// that identical runs produce byte-identical files.
inline std::string format_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return std::string(buf);
}

template <std::size_t N>
std::string format_vector(const std::array<double, N>& v) {
  std::string out;
  for (std::size_t i = 0; i < N; ++i) {
    if (i != 0) out += ';';
    out += format_real(v[i]);
  }
  return out;
}

}  // namespace gridtrust
