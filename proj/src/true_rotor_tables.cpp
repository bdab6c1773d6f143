#include <stdexcept>
#include <string>
#include <vector>

#include "psd/true_rotor.hpp"

namespace psd {

namespace {

// Coefficient tables over pi^2. Derived: stationary parts of the full transform of
// Y*_lm(theta+, phi+) Y_lm(theta-, phi-), written in (p, u). Raw: the full transform by
// Fourier mode in alpha.
// (l,m) = (1,0)
const std::vector<InvariantTerm> kDerived10 = {
    {0, 0, {3.0 / 2, 0.0, -3.0 / 2, 0.0, 0.0}},
};
const std::vector<RawTerm> kRaw10 = {
    {-1, 1, 2, {0.0, 0.0, -3.0 / 4, 0.0, 0.0}},
    {0, 0, 0, {3.0 / 2, 0.0, -3.0 / 4, 0.0, 0.0}},
    {0, 0, 2, {0.0, 0.0, -3.0 / 4, 0.0, 0.0}},
};
// (l,m) = (1,1)
const std::vector<InvariantTerm> kDerived11 = {
    {0, 0, {3.0 / 4, 0.0, 3.0 / 4, 0.0, 0.0}},
    {0, 1, {0.0, 3.0 / 2, 0.0, 0.0, 0.0}},
};
const std::vector<RawTerm> kRaw11 = {
    {-1, 1, 2, {0.0, 0.0, 3.0 / 8, 0.0, 0.0}},
    {0, 0, 0, {3.0 / 4, 0.0, 3.0 / 8, 0.0, 0.0}},
    {0, 0, 2, {0.0, 0.0, 3.0 / 8, 0.0, 0.0}},
    {0, 1, 1, {0.0, 3.0 / 2, 0.0, 0.0, 0.0}},
};
// (l,m) = (2,0)
const std::vector<InvariantTerm> kDerived20 = {
    {0, 0, {-15.0 / 4, 0.0, 0.0, 0.0, 15.0 / 4}},
    {1, 1, {45.0 / 8, 0.0, -45.0 / 4, 0.0, 45.0 / 8}},
};
const std::vector<RawTerm> kRaw20 = {
    {-1, 1, 2, {0.0, 0.0, -15.0 / 8, 0.0, 45.0 / 16}},
    {-1, 1, 4, {0.0, 0.0, 0.0, 0.0, 45.0 / 32}},
    {0, 0, 0, {-15.0 / 4, 0.0, 0.0, 0.0, 45.0 / 32}},
    {0, 0, 2, {0.0, 0.0, -15.0 / 8, 0.0, 45.0 / 16}},
    {0, 0, 4, {0.0, 0.0, 0.0, 0.0, 45.0 / 32}},
    {1, 1, 0, {45.0 / 8, 0.0, -45.0 / 8, 0.0, 135.0 / 64}},
    {1, 1, 2, {0.0, 0.0, -45.0 / 8, 0.0, 45.0 / 16}},
    {1, 1, 4, {0.0, 0.0, 0.0, 0.0, 45.0 / 64}},
};
// (l,m) = (2,1)
const std::vector<InvariantTerm> kDerived21 = {
    {0, 0, {-15.0 / 4, 0.0, 15.0 / 4, 0.0, -5.0 / 2}},
    {0, 1, {0.0, 0.0, 0.0, -5.0 / 2, 0.0}},
    {1, 0, {0.0, 15.0 / 2, 0.0, -15.0 / 2, 0.0}},
    {1, 1, {15.0 / 4, 0.0, 0.0, 0.0, -15.0 / 4}},
};
const std::vector<RawTerm> kRaw21 = {
    {-1, 1, 2, {0.0, 0.0, 15.0 / 8, 0.0, -15.0 / 8}},
    {-1, 1, 4, {0.0, 0.0, 0.0, 0.0, -15.0 / 16}},
    {0, 0, 0, {-15.0 / 4, 0.0, 15.0 / 8, 0.0, -15.0 / 16}},
    {0, 0, 2, {0.0, 0.0, 15.0 / 8, 0.0, -15.0 / 8}},
    {0, 0, 4, {0.0, 0.0, 0.0, 0.0, -15.0 / 16}},
    {0, 1, 1, {0.0, 0.0, 0.0, -15.0 / 8, 0.0}},
    {0, 1, 3, {0.0, 0.0, 0.0, -15.0 / 8, 0.0}},
    {1, 0, 1, {0.0, 15.0 / 2, 0.0, -45.0 / 8, 0.0}},
    {1, 0, 3, {0.0, 0.0, 0.0, -15.0 / 8, 0.0}},
    {1, 1, 0, {15.0 / 4, 0.0, 0.0, 0.0, -45.0 / 32}},
    {1, 1, 2, {0.0, 0.0, 0.0, 0.0, -15.0 / 8}},
    {1, 1, 4, {0.0, 0.0, 0.0, 0.0, -15.0 / 32}},
};
// (l,m) = (2,2)
const std::vector<InvariantTerm> kDerived22 = {
    {0, 0, {-15.0 / 8, 0.0, -15.0 / 4, 0.0, 5.0 / 8}},
    {0, 1, {0.0, -15.0 / 4, 0.0, 5.0 / 4, 0.0}},
    {1, 0, {0.0, 15.0 / 4, 0.0, 15.0 / 4, 0.0}},
    {1, 1, {15.0 / 16, 0.0, 45.0 / 8, 0.0, 15.0 / 16}},
};
const std::vector<RawTerm> kRaw22 = {
    {-1, 1, 2, {0.0, 0.0, -15.0 / 16, 0.0, 15.0 / 32}},
    {-1, 1, 4, {0.0, 0.0, 0.0, 0.0, 15.0 / 64}},
    {0, 0, 0, {-15.0 / 8, 0.0, -15.0 / 8, 0.0, 15.0 / 64}},
    {0, 0, 2, {0.0, 0.0, -15.0 / 16, 0.0, 15.0 / 32}},
    {0, 0, 4, {0.0, 0.0, 0.0, 0.0, 15.0 / 64}},
    {0, 1, 1, {0.0, -15.0 / 4, 0.0, 15.0 / 16, 0.0}},
    {0, 1, 3, {0.0, 0.0, 0.0, 15.0 / 16, 0.0}},
    {1, 0, 1, {0.0, 15.0 / 4, 0.0, 45.0 / 16, 0.0}},
    {1, 0, 3, {0.0, 0.0, 0.0, 15.0 / 16, 0.0}},
    {1, 1, 0, {15.0 / 16, 0.0, 45.0 / 16, 0.0, 45.0 / 128}},
    {1, 1, 2, {0.0, 0.0, 45.0 / 16, 0.0, 15.0 / 32}},
    {1, 1, 4, {0.0, 0.0, 0.0, 0.0, 15.0 / 128}},
};

// (2,1) as printed: the K0 cubic term carries p^3 instead of p, and the K1 cubic term
// is three times the stationary value.
const std::vector<InvariantTerm> kTranscribed21 = {
    {0, 0, {-15.0 / 4, 0.0, 15.0 / 4, 0.0, -5.0 / 2}},
    {0, 1, {0.0, 0.0, 0.0, -15.0 / 2, 0.0}},
    {1, 0, {0.0, 15.0 / 2, 0.0, 0.0, 0.0}},
    {1, 1, {15.0 / 4, 0.0, 0.0, 0.0, -15.0 / 4}},
    {3, 0, {0.0, 0.0, 0.0, -15.0 / 2, 0.0}},
};
const std::vector<InvariantTerm> kNone;
const std::vector<RawTerm> kNoneRaw;

void check(int l, int m) {
  if (!rotor_state_supported(l, m))
    throw UnsupportedState("rotor state (" + std::to_string(l) + "," + std::to_string(m) + ") is not available");
}

}  // namespace

const std::vector<InvariantTerm>& rotor_invariant_terms(int l, int m, RotorForm form) {
  check(l, m);
  m = m < 0 ? -m : m;
  if (l == 0) return kNone;
  if (l == 1) return m == 0 ? kDerived10 : kDerived11;
  if (m == 0) return kDerived20;
  if (m == 1) return form == RotorForm::transcribed ? kTranscribed21 : kDerived21;
  return kDerived22;
}

const std::vector<RawTerm>& rotor_raw_terms(int l, int m) {
  check(l, m);
  m = m < 0 ? -m : m;
  if (l == 0) return kNoneRaw;
  if (l == 1) return m == 0 ? kRaw10 : kRaw11;
  return m == 0 ? kRaw20 : m == 1 ? kRaw21 : kRaw22;
}

}  // namespace psd
