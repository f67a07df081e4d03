#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "osk/random.hpp"
#include "osk/word.hpp"

using namespace osk;

namespace {

Word w2(const char *s) { return parse_word(s, 2); }

Word random_raw(Rng &rng, int rank, int len) {
  Word w;
  for (int i = 0; i < len; ++i) {
    int g = 1 + rng.below(rank);
    w.push_back(rng.below(2) ? g : -g);
  }
  return w;
}

Automorphism random_whitehead_product(Rng &rng, int rank, int k) {
  auto moves = all_whitehead_moves(rank);
  Automorphism phi = Automorphism::identity(rank);
  for (int i = 0; i < k; ++i)
    phi = compose(phi, whitehead_move(rank, moves[static_cast<std::size_t>(rng.below(static_cast<int>(moves.size())))]));
  return phi;
}

}  // namespace

TEST_CASE("reduce_word examples") {
  CHECK(reduce_word(Word{1, -1, 2}, 2) == Word{2});
  CHECK(reduce_word(Word{}, 2).empty());
  CHECK(reduce_word(Word{1, 2, -2, 1}, 2) == Word{1, 1});
  CHECK_THROWS_AS(reduce_word(Word{3}, 2), DomainError);
  CHECK_THROWS_AS(reduce_word(Word{0}, 2), DomainError);
}

TEST_CASE("text form round trip") {
  CHECK(format_word(w2("xyXY"), 2) == "xyXY");
  CHECK(parse_word("xyYx", 2) == Word{1, 1});
  CHECK(format_word(parse_word("abCd", 4), 4) == "abCd");
  CHECK_THROWS_AS(parse_word("xz", 2), DomainError);
}

TEST_CASE("cyclic_reduce examples") {
  auto r = cyclic_reduce(w2("xyX"));
  CHECK(r.core == w2("y"));
  CHECK(r.conjugator == w2("x"));
  r = cyclic_reduce(w2("xy"));
  CHECK(r.core == w2("xy"));
  CHECK(r.conjugator.empty());
  r = cyclic_reduce(Word{1, -1});
  CHECK(r.core.empty());
  CHECK(r.conjugator.empty());
  CHECK(r.cls.empty());
}

TEST_CASE("cyclic_reduce reconstructs and never lengthens") {
  Rng rng(11);
  for (int t = 0; t < 500; ++t) {
    Word raw = random_raw(rng, 3, rng.below(12));
    Word w = reduce(raw);
    auto r = cyclic_reduce(w);
    CHECK(concat(concat(r.conjugator, r.core), inverse(r.conjugator)) == w);
    CHECK(r.core.size() <= w.size());
    bool already = w.size() < 2 || w.front() != -w.back();
    CHECK((r.core.size() == w.size()) == already);
    CHECK(r.cls.letters() == oracle::slow_canonical(raw));
  }
}

TEST_CASE("reduce is idempotent and matches the slow oracle") {
  Rng rng(3);
  for (int t = 0; t < 1000; ++t) {
    Word raw = random_raw(rng, 3, rng.below(16));
    Word r = reduce_word(raw, 3);
    CHECK(reduce_word(r, 3) == r);
    CHECK(r == oracle::slow_reduce(raw));
  }
}

TEST_CASE("canonical cyclic words") {
  CHECK(CyclicWord(w2("yx")) == CyclicWord(w2("xy")));
  CHECK(CyclicWord(w2("YX")) == CyclicWord(w2("xy")));
  CHECK(CyclicWord(w2("xyX")) == CyclicWord(w2("y")));
  // Count of conjugacy classes up to inversion with length 2 in rank 2:
  // xx, yy, xy, xY.
  CHECK(canonical_cyclic_words(2, 2).size() == 4);
  for (int len = 1; len <= 5; ++len) {
    std::set<Word> expect;
    for (auto &w : oracle::cyclically_reduced_words(2, len)) expect.insert(oracle::slow_canonical(w));
    auto got = canonical_cyclic_words(2, len);
    CHECK(got.size() == expect.size());
  }
}

TEST_CASE("apply_endomorphism examples") {
  auto phi = Automorphism::from_strings(2, {"xy", "x"});
  CHECK(apply_endomorphism(phi, w2("yx")) == w2("xxy"));
  auto id = Automorphism::identity(2);
  CHECK(apply_endomorphism(id, w2("xyXXy")) == w2("xyXXy"));
  auto psi = Automorphism::from_strings(2, {"x", "xyy"});
  CHECK(apply_endomorphism(psi, w2("xY")) == w2("xYYX"));
  CHECK_THROWS_AS(apply_endomorphism(phi, Word{3}), DomainError);
}

TEST_CASE("apply respects composition") {
  Rng rng(5);
  for (int t = 0; t < 1000; ++t) {
    int rank = 2 + rng.below(2);
    auto phi = random_whitehead_product(rng, rank, 1 + rng.below(3));
    auto psi = random_whitehead_product(rng, rank, 1 + rng.below(3));
    Word w = reduce(random_raw(rng, rank, rng.below(10)));
    CHECK(apply_endomorphism(compose(phi, psi), w) == apply_endomorphism(phi, apply_endomorphism(psi, w)));
    CHECK(apply_endomorphism(phi, w) == oracle::subst(phi.images, w));
  }
}

TEST_CASE("whitehead_move examples") {
  auto id = whitehead_move(2, Word{1}, 1);
  CHECK(id == Automorphism::identity(2));
  auto m = whitehead_move(2, Word{1, 2}, 1);
  CHECK(m.image(1) == w2("x"));
  CHECK(m.image(2) == w2("yX"));
  auto c = whitehead_move(2, Word{1, 2, -2}, 1);
  CHECK(c.image(2) == w2("xyX"));
  CHECK_THROWS_AS(whitehead_move(2, Word{2}, 1), DomainError);
  CHECK_THROWS_AS(whitehead_move(2, Word{1, -1}, 1), DomainError);
}

TEST_CASE("whitehead moves agree with the letterwise rule") {
  for (int rank = 1; rank <= 3; ++rank) {
    for (auto &m : oracle::all_moves(rank)) {
      Word A(m.A.begin(), m.A.end());
      auto phi = whitehead_move(rank, A, m.a);
      for (int x = 1; x <= rank; ++x) CHECK(phi.image(x) == oracle::slow_reduce(oracle::wh_letter(m.A, m.a, x)));
    }
  }
}

TEST_CASE("verify_inverse examples") {
  auto phi = Automorphism::from_strings(2, {"xy", "x"});
  auto psi = Automorphism::from_strings(2, {"y", "Yx"});
  CHECK(verify_inverse(phi, psi));
  CHECK(verify_inverse(Automorphism::identity(2), Automorphism::identity(2)));
  CHECK_FALSE(verify_inverse(phi, phi));
  CHECK_THROWS_AS(verify_inverse(phi, Automorphism::identity(3)), DomainError);
}

TEST_CASE("every whitehead move is inverted by its inverse move") {
  for (int rank = 1; rank <= 3; ++rank) {
    for (auto &m : all_whitehead_moves(rank)) {
      auto phi = whitehead_move(rank, m);
      auto inv = whitehead_move(rank, inverse_move(m));
      CHECK(verify_inverse(phi, inv));
    }
  }
}

TEST_CASE("folding inverse") {
  auto phi = Automorphism::from_strings(2, {"xy", "x"});
  auto inv = invert(phi);
  CHECK(inv.image(1) == w2("y"));
  CHECK(inv.image(2) == w2("Yx"));
  CHECK_THROWS_AS(invert(Automorphism::from_strings(2, {"xx", "y"})), DomainError);
  CHECK_THROWS_AS(invert(Automorphism::from_strings(2, {"xy", "yx"})), DomainError);
  CHECK_THROWS_AS(invert(Automorphism::from_strings(2, {"x", "x"})), DomainError);
  Rng rng(9);
  for (int t = 0; t < 300; ++t) {
    int rank = 2 + rng.below(2);
    auto a = random_whitehead_product(rng, rank, rng.below(8));
    CHECK(verify_inverse(a, invert(a)));
  }
}

TEST_CASE("inverse moves agree with the folding inverse") {
  for (int rank = 1; rank <= 3; ++rank)
    for (auto &m : all_whitehead_moves(rank)) CHECK(whitehead_move(rank, inverse_move(m)) == invert(whitehead_move(rank, m)));
}
