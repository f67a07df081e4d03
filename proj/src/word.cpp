#include "osk/word.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <map>
#include <numeric>

namespace osk {

bool word_less(std::span<const Letter> a, std::span<const Letter> b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                      [](Letter x, Letter y) { return letter_key(x) < letter_key(y); });
}

Word reduce(std::span<const Letter> letters) {
  Word out;
  out.reserve(letters.size());
  for (Letter l : letters) {
    if (!out.empty() && out.back() == -l)
      out.pop_back();
    else
      out.push_back(l);
  }
  return out;
}

Word reduce_word(std::span<const Letter> letters, int rank) {
  for (Letter l : letters)
    if (l == 0 || std::abs(l) > rank)
      throw DomainError("letter index " + std::to_string(l) + " outside rank " + std::to_string(rank));
  return reduce(letters);
}

Word inverse(std::span<const Letter> w) {
  Word out(w.rbegin(), w.rend());
  for (auto &l : out) l = -l;
  return out;
}

Word concat(std::span<const Letter> a, std::span<const Letter> b) {
  Word out = reduce(a);
  for (Letter l : b) {
    if (!out.empty() && out.back() == -l)
      out.pop_back();
    else
      out.push_back(l);
  }
  return out;
}

Word power(std::span<const Letter> w, int k) {
  Word base = k >= 0 ? Word(w.begin(), w.end()) : inverse(w);
  Word out;
  for (int i = 0; i < std::abs(k); ++i) out = concat(out, base);
  return out;
}

char letter_char(Letter l, int rank) {
  int i = std::abs(l);
  char c = rank <= 3 ? static_cast<char>('x' + i - 1) : static_cast<char>('a' + i - 1);
  return l < 0 ? static_cast<char>(std::toupper(c)) : c;
}

Word parse_word(std::string_view text, int rank) {
  if (rank < 1 || rank > 26) throw DomainError("rank must be in [1,26] for text words");
  Word out;
  for (char ch : text) {
    if (std::isspace(static_cast<unsigned char>(ch)) || ch == '1') continue;
    char lower = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    int idx = rank <= 3 ? lower - 'x' + 1 : lower - 'a' + 1;
    if (!std::isalpha(static_cast<unsigned char>(ch)) || idx < 1 || idx > rank)
      throw DomainError(std::string("letter '") + ch + "' outside rank " + std::to_string(rank));
    out.push_back(std::isupper(static_cast<unsigned char>(ch)) ? -idx : idx);
  }
  return reduce(out);
}

std::string format_word(std::span<const Letter> w, int rank) {
  if (w.empty()) return "1";
  std::string s;
  for (Letter l : w) s.push_back(letter_char(l, rank));
  return s;
}

Word least_rotation(std::span<const Letter> w) {
  Word best(w.begin(), w.end());
  Word rot(w.begin(), w.end());
  for (std::size_t i = 1; i < w.size(); ++i) {
    std::rotate(rot.begin(), rot.begin() + 1, rot.end());
    if (word_less(rot, best)) best = rot;
  }
  return best;
}

CyclicReduction cyclic_reduce(std::span<const Letter> w) {
  Word r = reduce(w);
  std::size_t i = 0, j = r.size();
  while (j - i >= 2 && r[i] == -r[j - 1]) {
    ++i;
    --j;
  }
  CyclicReduction out;
  out.conjugator.assign(r.begin(), r.begin() + static_cast<long>(i));
  out.core.assign(r.begin() + static_cast<long>(i), r.begin() + static_cast<long>(j));
  out.cls = CyclicWord(out.core);
  return out;
}

CyclicWord::CyclicWord(std::span<const Letter> w) {
  Word r = reduce(w);
  std::size_t i = 0, j = r.size();
  while (j - i >= 2 && r[i] == -r[j - 1]) {
    ++i;
    --j;
  }
  Word core(r.begin() + static_cast<long>(i), r.begin() + static_cast<long>(j));
  Word a = least_rotation(core);
  Word b = least_rotation(osk::inverse(core));
  letters_ = word_less(b, a) ? std::move(b) : std::move(a);
}

CyclicWord CyclicWord::inverse() const { return CyclicWord(osk::inverse(letters_)); }

Automorphism Automorphism::identity(int rank) {
  Automorphism a;
  a.rank = rank;
  for (int i = 1; i <= rank; ++i) a.images.push_back({i});
  a.verified = true;
  return a;
}

Automorphism Automorphism::from_strings(int rank, const std::vector<std::string> &imgs) {
  if (static_cast<int>(imgs.size()) != rank) throw DomainError("need one image per generator");
  Automorphism a;
  a.rank = rank;
  for (auto &s : imgs) a.images.push_back(parse_word(s, rank));
  return a;
}

Word apply_endomorphism(const Automorphism &phi, std::span<const Letter> w) {
  Word out;
  for (Letter l : w) {
    if (l == 0 || std::abs(l) > phi.rank)
      throw DomainError("rank mismatch: letter " + std::to_string(l) + " for rank " + std::to_string(phi.rank));
    const Word &img = phi.images[static_cast<std::size_t>(std::abs(l) - 1)];
    if (l > 0) {
      for (Letter m : img) {
        if (!out.empty() && out.back() == -m)
          out.pop_back();
        else
          out.push_back(m);
      }
    } else {
      for (auto it = img.rbegin(); it != img.rend(); ++it) {
        Letter m = -*it;
        if (!out.empty() && out.back() == -m)
          out.pop_back();
        else
          out.push_back(m);
      }
    }
  }
  return out;
}

CyclicWord apply_endomorphism(const Automorphism &phi, const CyclicWord &w) { return CyclicWord(apply_endomorphism(phi, w.letters())); }

Automorphism compose(const Automorphism &phi, const Automorphism &psi) {
  if (phi.rank != psi.rank) throw DomainError("rank mismatch in composition");
  Automorphism out;
  out.rank = phi.rank;
  for (auto &img : psi.images) out.images.push_back(apply_endomorphism(phi, img));
  out.verified = phi.verified && psi.verified;
  return out;
}

Automorphism power(const Automorphism &phi, int k) {
  if (k < 0) throw DomainError("negative power needs an inverse");
  Automorphism out = Automorphism::identity(phi.rank);
  out.verified = phi.verified;
  for (int i = 0; i < k; ++i) out = compose(out, phi);
  return out;
}

bool verify_inverse(const Automorphism &phi, const Automorphism &psi) {
  if (phi.rank != psi.rank) throw DomainError("rank mismatch in verify_inverse");
  Automorphism a = compose(phi, psi), b = compose(psi, phi);
  for (int i = 1; i <= phi.rank; ++i) {
    if (a.image(i) != Word{i} || b.image(i) != Word{i}) return false;
  }
  return true;
}

namespace {

// Stallings folding of a wedge of petals labelled by the images of phi.
// Each edge also carries a word in the domain so that the domain product
// along any closed path at the base maps to the target word read along it.
struct FoldEdge {
  int from, to;
  Letter label;  // positive target letter
  Word dom;
  bool alive = true;
};

struct Folder {
  std::vector<FoldEdge> edges;
  int n_vertices = 1;

  void potential(int w, const Word &g) {
    Word gi = inverse(g);
    for (auto &e : edges) {
      if (!e.alive) continue;
      if (e.to == w) e.dom = concat(e.dom, g);
      if (e.from == w) e.dom = concat(gi, e.dom);
    }
  }

  struct End {
    int edge;
    bool forward;
    int other;
    Letter label;
  };

  std::vector<End> ends_at(int v) const {
    std::vector<End> out;
    for (int i = 0; i < static_cast<int>(edges.size()); ++i) {
      auto &e = edges[static_cast<std::size_t>(i)];
      if (!e.alive) continue;
      if (e.from == v) out.push_back({i, true, e.to, e.label});
      if (e.to == v) out.push_back({i, false, e.from, -e.label});
    }
    return out;
  }

  Word end_dom(const End &x) const {
    auto &e = edges[static_cast<std::size_t>(x.edge)];
    return x.forward ? e.dom : inverse(e.dom);
  }

  bool fold_once() {
    for (int v = 0; v < n_vertices; ++v) {
      auto ends = ends_at(v);
      for (std::size_t i = 0; i < ends.size(); ++i) {
        for (std::size_t j = i + 1; j < ends.size(); ++j) {
          if (ends[i].label != ends[j].label || ends[i].edge == ends[j].edge) continue;
          End e1 = ends[i], e2 = ends[j];
          if (e1.other != e2.other) {
            int w = e2.other != 0 ? e2.other : e1.other;
            if (w == e1.other) std::swap(e1, e2);
            potential(w, concat(inverse(end_dom(e2)), end_dom(e1)));
            // Re-read both ends after the potential shift.
            auto &k1 = edges[static_cast<std::size_t>(e1.edge)];
            auto &k2 = edges[static_cast<std::size_t>(e2.edge)];
            Word d1 = e1.forward ? k1.dom : inverse(k1.dom);
            Word d2 = e2.forward ? k2.dom : inverse(k2.dom);
            if (d1 != d2) throw DomainError("internal folding inconsistency");
            k2.alive = false;
            for (auto &e : edges) {
              if (!e.alive) continue;
              if (e.from == w) e.from = e1.other;
              if (e.to == w) e.to = e1.other;
            }
          } else {
            if (end_dom(e1) != end_dom(e2)) throw DomainError("map is not injective");
            edges[static_cast<std::size_t>(e2.edge)].alive = false;
          }
          return true;
        }
      }
    }
    return false;
  }
};

}  // namespace

Automorphism invert(const Automorphism &phi) {
  const int n = phi.rank;
  Folder f;
  for (int i = 1; i <= n; ++i) {
    const Word &img = phi.image(i);
    if (img.empty()) throw DomainError("generator image is trivial");
    int prev = 0;
    for (std::size_t k = 0; k < img.size(); ++k) {
      int next = k + 1 == img.size() ? 0 : f.n_vertices++;
      Word dom = k == 0 ? Word{i} : Word{};
      Letter l = img[k];
      if (l > 0)
        f.edges.push_back({prev, next, l, dom, true});
      else
        f.edges.push_back({next, prev, -l, inverse(dom), true});
      prev = next;
    }
  }
  while (f.fold_once()) {
  }
  Automorphism out;
  out.rank = n;
  out.images.assign(static_cast<std::size_t>(n), Word{});
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  int alive = 0;
  for (auto &e : f.edges) {
    if (!e.alive) continue;
    ++alive;
    if (e.from != 0 || e.to != 0) throw DomainError("map is not surjective");
    auto idx = static_cast<std::size_t>(e.label - 1);
    if (seen[idx]) throw DomainError("map is not injective");
    seen[idx] = true;
    out.images[idx] = e.dom;
  }
  if (alive != n) throw DomainError("map is not surjective");
  out.verified = true;
  return out;
}

Automorphism certify(Automorphism phi) {
  invert(phi);
  phi.verified = true;
  return phi;
}

bool move_less(const WhiteheadMove &m, const WhiteheadMove &n) {
  if (m.a != n.a) return letter_key(m.a) < letter_key(n.a);
  return word_less(m.A, n.A);
}

std::string format_move(const WhiteheadMove &m, int rank) {
  std::string s = "({";
  for (std::size_t i = 0; i < m.A.size(); ++i) {
    if (i) s += ",";
    s.push_back(letter_char(m.A[i], rank));
  }
  s += "},";
  s.push_back(letter_char(m.a, rank));
  s += ")";
  return s;
}

Automorphism whitehead_move(int rank, std::span<const Letter> A, Letter a) {
  auto in = [&](Letter l) { return std::find(A.begin(), A.end(), l) != A.end(); };
  for (Letter l : A)
    if (l == 0 || std::abs(l) > rank) throw DomainError("invalid move: letter outside rank");
  if (a == 0 || std::abs(a) > rank) throw DomainError("invalid move: letter outside rank");
  if (!in(a) || in(-a)) throw DomainError("invalid move: need a in A and a^-1 not in A");
  Automorphism phi;
  phi.rank = rank;
  for (int x = 1; x <= rank; ++x) {
    if (x == std::abs(a)) {
      phi.images.push_back({x});
      continue;
    }
    bool p = in(x), q = in(-x);
    if (p && q)
      phi.images.push_back({a, x, -a});
    else if (p)
      phi.images.push_back({x, -a});
    else if (q)
      phi.images.push_back({a, x});
    else
      phi.images.push_back({x});
  }
  phi.verified = true;
  return phi;
}

Automorphism whitehead_move(int rank, const WhiteheadMove &m) { return whitehead_move(rank, m.A, m.a); }

WhiteheadMove inverse_move(const WhiteheadMove &m) {
  WhiteheadMove out;
  out.a = -m.a;
  for (Letter l : m.A)
    if (l != m.a) out.A.push_back(l);
  out.A.push_back(-m.a);
  std::sort(out.A.begin(), out.A.end(), [](Letter x, Letter y) { return letter_key(x) < letter_key(y); });
  return out;
}

std::vector<WhiteheadMove> all_whitehead_moves(int rank) {
  std::vector<Letter> letters;
  for (int i = 1; i <= rank; ++i) {
    letters.push_back(i);
    letters.push_back(-i);
  }
  std::vector<WhiteheadMove> out;
  for (Letter a : letters) {
    std::vector<Letter> rest;
    for (Letter l : letters)
      if (l != a && l != -a) rest.push_back(l);
    for (unsigned mask = 0; mask < (1u << rest.size()); ++mask) {
      WhiteheadMove m;
      m.a = a;
      m.A.push_back(a);
      for (std::size_t k = 0; k < rest.size(); ++k)
        if (mask & (1u << k)) m.A.push_back(rest[k]);
      std::sort(m.A.begin(), m.A.end(), [](Letter x, Letter y) { return letter_key(x) < letter_key(y); });
      out.push_back(std::move(m));
    }
  }
  std::sort(out.begin(), out.end(), move_less);
  return out;
}

namespace {

void extend_words(int rank, int len, Word &cur, std::vector<CyclicWord> &out) {
  if (static_cast<int>(cur.size()) == len) {
    if (cur.size() > 1 && cur.front() == -cur.back()) return;
    CyclicWord c(cur);
    if (c.letters() == cur) out.push_back(std::move(c));
    return;
  }
  for (int i = 1; i <= rank; ++i) {
    for (Letter l : {-i, i}) {
      if (!cur.empty() && cur.back() == -l) continue;
      cur.push_back(l);
      extend_words(rank, len, cur, out);
      cur.pop_back();
    }
  }
}

}  // namespace

std::vector<CyclicWord> canonical_cyclic_words(int rank, int len) {
  std::vector<CyclicWord> out;
  Word cur;
  if (len > 0) extend_words(rank, len, cur, out);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace osk
