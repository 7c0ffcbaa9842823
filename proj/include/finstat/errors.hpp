#pragma once

#include <stdexcept>

namespace finstat {

// Base of every failure this library raises on bad data. Programming errors
// (out-of-range indices and the like) use the standard exceptions instead.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Structural size disagreement (vector length vs space size, family length
// vs base size, sequence index out of range).
struct SizeError : Error {
  using Error::Error;
};

// Two objects that must live on the same finite set do not.
struct SpaceMismatch : Error {
  using Error::Error;
};

// Entries negative beyond slack, or mass/row sums off by more than slack.
struct NotStochastic : Error {
  using Error::Error;
};

// A channel claimed to be deterministic has a row that is not a point mass.
struct NotPure : Error {
  using Error::Error;
};

// s fails f(s(y)) = y within tolerance, or puts mass outside a fiber.
struct NotASection : Error {
  using Error::Error;
};

struct NotSurjective : Error {
  using Error::Error;
};

// Composition requires the pushforward of one piece to equal the prior of
// the next; they differ beyond tolerance.
struct PriorMismatch : Error {
  using Error::Error;
};

// One of the three square conditions failed; message says which and by how much.
struct SquareDoesNotCommute : Error {
  using Error::Error;
};

// Pasting data that must agree (shared channel of a vertical pair, shared
// boundary of a horizontal pair) differs beyond tolerance.
struct GlueMismatch : Error {
  using Error::Error;
};

struct EmptyFamily : Error {
  using Error::Error;
};

struct UnknownSuite : Error {
  using Error::Error;
};

// Document text is not well-formed (bad JSON, wrong shape, bad number).
struct ParseError : Error {
  using Error::Error;
};

// A document entry refers to a name or label that does not exist.
struct DanglingReference : Error {
  using Error::Error;
};

// Duplicate key in a document section, or duplicate label in a set.
struct DuplicateName : Error {
  using Error::Error;
};

}  // namespace finstat
