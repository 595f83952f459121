#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace leakproof {

enum class ErrorKind {
  // group construction
  NotAssociative,
  NoIdentity,
  NoInverse,
  DuplicateName,
  TooLarge,
  ParseError,
  CentreMismatch,
  NotAbelian,
  NotMember,
  // graphs and embeddings
  NotSpanning,
  NotForest,
  NotSubgraph,
  HostTooLarge,
  NotPlanarEmbedding,
  GraphMismatch,
  EdgeMissing,
  // flows
  NotTractable,
  BridgeEdge,
  GraphIsPlanar,
  NotInKernel,
  // a certificate failed its own re-verification
  InternalInvariant,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace leakproof
