/** @file word.hpp
 *  Words, cyclic words and endomorphisms of a finite-rank free group.
 */
#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace osk {

/// Raised for violated mathematical preconditions (bad rank, invalid move, ...).
class DomainError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Generator i is the integer i, its inverse is -i.
using Letter = int;
using Word = std::vector<Letter>;

inline Letter inv(Letter l) { return -l; }

/// Total order on letters used for every lexicographic comparison in the
/// library. It agrees with the ASCII order of the text form: inverses
/// (uppercase) first, then by generator index.
inline int letter_key(Letter l) { return l < 0 ? -l : (1 << 20) + l; }

bool word_less(std::span<const Letter> a, std::span<const Letter> b);

/// Free reduction. Throws DomainError if a letter is 0 or exceeds the rank.
Word reduce_word(std::span<const Letter> letters, int rank);
/// Free reduction without a rank check.
Word reduce(std::span<const Letter> letters);

Word inverse(std::span<const Letter> w);
Word concat(std::span<const Letter> a, std::span<const Letter> b);
Word power(std::span<const Letter> w, int k);

/// Text form. Rank at most 3 uses x,y,z; larger ranks use a..z.
/// Uppercase denotes the inverse.
Word parse_word(std::string_view text, int rank);
std::string format_word(std::span<const Letter> w, int rank);
char letter_char(Letter l, int rank);

/// A cyclically reduced word stored in canonical form: the least rotation
/// of the word or its inverse under letter_key.
class CyclicWord {
public:
  CyclicWord() = default;
  /// Cyclically reduces and canonicalises an arbitrary word.
  explicit CyclicWord(std::span<const Letter> w);

  const Word &letters() const { return letters_; }
  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  CyclicWord inverse() const;

  bool operator==(const CyclicWord &o) const { return letters_ == o.letters_; }
  bool operator<(const CyclicWord &o) const { return word_less(letters_, o.letters_); }

private:
  Word letters_;
};

/// Least rotation of an already cyclically reduced word (no inversion).
Word least_rotation(std::span<const Letter> w);

struct CyclicReduction {
  Word core;        ///< cyclically reduced, in the rotation left by the peel
  Word conjugator;  ///< w = conjugator * core * conjugator^-1
  CyclicWord cls;   ///< canonical form of core
};

CyclicReduction cyclic_reduce(std::span<const Letter> w);

/// Endomorphism given by generator images. Images are stored reduced.
struct Automorphism {
  int rank = 0;
  std::vector<Word> images;
  /// Set only by explicit certification (invert, whitehead_move, compose of
  /// verified maps).
  bool verified = false;

  static Automorphism identity(int rank);
  /// Parses images given in text form, one per generator.
  static Automorphism from_strings(int rank, const std::vector<std::string> &imgs);

  const Word &image(int generator) const { return images.at(generator - 1); }
  bool operator==(const Automorphism &o) const { return rank == o.rank && images == o.images; }
};

Word apply_endomorphism(const Automorphism &phi, std::span<const Letter> w);
CyclicWord apply_endomorphism(const Automorphism &phi, const CyclicWord &w);

/// (phi * psi)(x) = phi(psi(x)).
Automorphism compose(const Automorphism &phi, const Automorphism &psi);
/// phi^k for k >= 0; negative k needs a supplied inverse.
Automorphism power(const Automorphism &phi, int k);

/// True iff phi*psi and psi*phi fix every generator.
bool verify_inverse(const Automorphism &phi, const Automorphism &psi);

/// Inverse via Stallings folding of the generator images. Throws DomainError
/// when phi is not an automorphism. The result and, as a side effect of
/// success, the certification are marked verified.
Automorphism invert(const Automorphism &phi);
/// Returns phi with verified set, or throws if it is not bijective.
Automorphism certify(Automorphism phi);

struct WhiteheadMove {
  std::vector<Letter> A;  ///< sorted by letter_key
  Letter a = 0;

  bool operator==(const WhiteheadMove &o) const { return a == o.a && A == o.A; }
};

bool move_less(const WhiteheadMove &m, const WhiteheadMove &n);
std::string format_move(const WhiteheadMove &m, int rank);

/// phi_(A,a). Throws DomainError unless a in A and a^-1 not in A.
Automorphism whitehead_move(int rank, std::span<const Letter> A, Letter a);
Automorphism whitehead_move(int rank, const WhiteheadMove &m);
/// The inverse automorphism, phi_(A - a + a^-1, a^-1).
WhiteheadMove inverse_move(const WhiteheadMove &m);

/// Every move (A,a) of the given rank, in increasing (a, sorted A) order.
std::vector<WhiteheadMove> all_whitehead_moves(int rank);

/// All cyclically reduced words of length exactly len, in canonical form,
/// without duplicates.
std::vector<CyclicWord> canonical_cyclic_words(int rank, int len);

}  // namespace osk

template <> struct std::hash<osk::CyclicWord> {
  std::size_t operator()(const osk::CyclicWord &w) const noexcept {
    std::size_t h = w.size();
    for (auto l : w.letters()) h = h * 1000003u ^ static_cast<std::size_t>(l + 64);
    return h;
  }
};
