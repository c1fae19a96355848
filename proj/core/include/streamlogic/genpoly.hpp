#ifndef STREAMLOGIC_GENPOLY_HPP
#define STREAMLOGIC_GENPOLY_HPP

#include <map>
#include <string>
#include <vector>

#include "streamlogic/formula.hpp"
#include "streamlogic/multipoly.hpp"

namespace streamlogic {

// Table of polynomial generators. Index 0 is always the shift constant X;
// further indices are interned on demand for variables and, during the
// definitional-expansion passes, for opaque hd/tl/stream subterms.
class GenTable {
  public:
    GenTable();

    int intern(const TermPtr& t);
    int intern_var(const std::string& name);
    const TermPtr& term_of(int idx) const { return terms_[idx]; }
    int size() const { return static_cast<int>(terms_.size()); }
    // -1 when the term was never interned.
    int lookup(const TermPtr& t) const;

    static constexpr int kShift = 0; // the X constant

    std::vector<std::string> names() const;

  private:
    std::vector<TermPtr> terms_;
    std::map<std::string, int> index_;
};

// Polynomial form of a term over the generator table. When opaque = false,
// only variables and X are admitted as generators; hd/tl/cons/stream
// constants raise UNSUPPORTED_FRAGMENT.
MultiPoly term_to_poly(const TermPtr& t, GenTable& gens, bool opaque);

TermPtr poly_to_term(const MultiPoly& p, const GenTable& gens);

} // namespace streamlogic

#endif
