#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace medlat {

enum class ErrorKind {
  InvalidSize,
  InvalidInput,
  InvalidElement,
  UnknownElement,
  TooLarge,
  NotAPoset,
  RedundantCover,
  NotALattice,
  NotDistributive,
  NotBounded,
  CarrierMismatch,
  NotHypercube,
  NotTopped,
  NotConsistent,
  BallotOutOfSpace,
  ArityMismatch,
  CornerNotInBallotSpace,
  BadLeafIndex,
  MalformedTree,
  UnboundVariable,
  NoSuitableSublattice,
  NotEnoughAtoms,
  NotAChain,
  ParseError,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidSize: return "InvalidSize";
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::InvalidElement: return "InvalidElement";
    case ErrorKind::UnknownElement: return "UnknownElement";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::NotAPoset: return "NotAPoset";
    case ErrorKind::RedundantCover: return "RedundantCover";
    case ErrorKind::NotALattice: return "NotALattice";
    case ErrorKind::NotDistributive: return "NotDistributive";
    case ErrorKind::NotBounded: return "NotBounded";
    case ErrorKind::CarrierMismatch: return "CarrierMismatch";
    case ErrorKind::NotHypercube: return "NotHypercube";
    case ErrorKind::NotTopped: return "NotTopped";
    case ErrorKind::NotConsistent: return "NotConsistent";
    case ErrorKind::BallotOutOfSpace: return "BallotOutOfSpace";
    case ErrorKind::ArityMismatch: return "ArityMismatch";
    case ErrorKind::CornerNotInBallotSpace: return "CornerNotInBallotSpace";
    case ErrorKind::BadLeafIndex: return "BadLeafIndex";
    case ErrorKind::MalformedTree: return "MalformedTree";
    case ErrorKind::UnboundVariable: return "UnboundVariable";
    case ErrorKind::NoSuitableSublattice: return "NoSuitableSublattice";
    case ErrorKind::NotEnoughAtoms: return "NotEnoughAtoms";
    case ErrorKind::NotAChain: return "NotAChain";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Every failure in the library is reported through this exception. `witness`
/// carries the offending element names (a pair, a triple, ...) when one exists.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string message, std::vector<std::string> witness = {})
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind),
        witness_(std::move(witness)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::vector<std::string>& witness() const noexcept { return witness_; }

 private:
  ErrorKind kind_;
  std::vector<std::string> witness_;
};

}  // namespace medlat
