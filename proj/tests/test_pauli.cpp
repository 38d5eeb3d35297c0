#include "doctest.h"
#include "gsf/pauli.hpp"

#include <stdexcept>

using gsf::PauliTerm;

TEST_CASE("string round trip") {
  for (const char* s : {"+XIZ", "-IYZ", "+IIII", "-Y"}) {
    CHECK(PauliTerm::from_string(s).str() == s);
  }
  CHECK(PauliTerm::from_string("XZ").str() == "+XZ");
}

TEST_CASE("commutation is the symplectic inner product") {
  auto X = PauliTerm::from_string("X");
  auto Y = PauliTerm::from_string("Y");
  auto Z = PauliTerm::from_string("Z");
  CHECK(!X.commutes_with(Z));
  CHECK(!X.commutes_with(Y));
  CHECK(!Y.commutes_with(Z));
  CHECK(X.commutes_with(X));
  CHECK(PauliTerm::from_string("XX").commutes_with(PauliTerm::from_string("ZZ")));
  CHECK(!PauliTerm::from_string("XI").commutes_with(PauliTerm::from_string("ZI")));
}

TEST_CASE("products of commuting terms track signs") {
  auto xx = PauliTerm::from_string("XX");
  auto zz = PauliTerm::from_string("ZZ");
  auto p = xx;
  p.mul(zz);
  // XX * ZZ = (XZ)(XZ) = (-iY)(-iY) = -YY
  CHECK(p.str() == "-YY");
  auto q = zz;
  q.mul(xx);
  // ZZ * XX = (ZX)(ZX) = (iY)(iY) = -YY
  CHECK(q.str() == "-YY");

  auto a = PauliTerm::from_string("-XX");
  a.mul(PauliTerm::from_string("-ZZ"));
  CHECK(a.str() == "-YY");
}

TEST_CASE("anticommuting product is rejected") {
  auto x = PauliTerm::from_string("X");
  CHECK_THROWS_AS(x.mul(PauliTerm::from_string("Z")), std::logic_error);
}

TEST_CASE("self product is identity") {
  auto y = PauliTerm::from_string("-YXZ");
  auto p = y;
  p.mul(y);
  CHECK(p.str() == "+III");
}

TEST_CASE("weight and identity checks") {
  CHECK(PauliTerm::from_string("IXIY").weight() == 2);
  CHECK(PauliTerm::from_string("-III").is_identity_bits());
  CHECK(!PauliTerm::from_string("IIZ").is_identity_bits());
}
