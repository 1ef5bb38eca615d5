#ifndef PROOFWRITER_TESTS_FIXTURES_HPP
#define PROOFWRITER_TESTS_FIXTURES_HPP

#include "proofwriter/grammar.hpp"
#include "proofwriter/model.hpp"

namespace fixtures {

using namespace proofwriter;

// 20-sentence animal theory used by the QA-with-proof and enumeration golden
// tests (open-world: it states negative facts).
inline const char* kAnimalContext20 =
    "sent1: The tiger chases the lion. "
    "sent2: The lion is not big. "
    "sent3: If something visits the dog and it is kind then it visits the mouse. "
    "sent4: The dog chases the lion. "
    "sent5: If something is big then it visits the dog. "
    "sent6: The tiger eats the dog. "
    "sent7: If something visits the tiger and the tiger is not red then it is not nice. "
    "sent8: If something chases the dog then it is not red. "
    "sent9: The mouse does not chase the tiger. "
    "sent10: If something visits the mouse then the mouse is red. "
    "sent11: The tiger visits the lion. "
    "sent12: The tiger does not eat the mouse. "
    "sent13: The mouse is nice. "
    "sent14: The lion does not eat the tiger. "
    "sent15: If the tiger visits the dog and the dog is not big then the dog chases the mouse. "
    "sent16: The lion visits the tiger. "
    "sent17: If something chases the lion and it visits the dog then it chases the dog. "
    "sent18: The dog is nice. "
    "sent19: If something chases the lion then it is big. "
    "sent20: If something eats the lion then it is not cold.";

// Expected encoded proof for "The lion is not nice?" over the theory above.
inline const char* kAnimalProofAtDialect =
    "# sent7@int1 & sent16 # sent8@int2 # sent17@int3 & sent1 # sent5@int4 # sent19@int5 sent1 "
    "; with int1: The lion is not nice. ; int2: The tiger is not red. ; int3: The tiger chases "
    "the dog. ; int4: The tiger visits the dog. ; int5: The tiger is big.";

// The nine implications of kAnimalContext20, in (depth, text) order.
inline const char* kAnimalImplications[] = {
    "The dog is big.",      "The tiger is big.",      "The dog visits the dog.",
    "The tiger visits the dog.", "The dog chases the dog.", "The tiger chases the dog.",
    "The dog is not red.",  "The tiger is not red.",  "The lion is not nice.",
};

// 27-sentence animal theory for the one-step generator tests.
inline const char* kAnimalContext27 =
    "sent1: If something eats the cow and it is big then the cow sees the bald eagle. "
    "sent2: If something likes the bald eagle then it is rough. "
    "sent3: If something eats the dog then it likes the cow. "
    "sent4: Big things are young. "
    "sent5: If something likes the cow then it eats the cow. "
    "sent6: If something sees the bald eagle then the bald eagle eats the cow. "
    "sent7: If something likes the bald eagle then the bald eagle is kind. "
    "sent8: If something sees the bald eagle then the bald eagle eats the dog. "
    "sent9: The bald eagle eats the cow. "
    "sent10: The bald eagle sees the dog. "
    "sent11: The dog is big. "
    "sent12: The cow likes the bald eagle. "
    "sent13: The bald eagle is young. "
    "sent14: The dog sees the cow. "
    "sent15: The bald eagle is kind. "
    "sent16: The dog is young. "
    "sent17: The bald eagle sees the cow. "
    "sent18: The bald eagle is rough. "
    "sent19: The cow eats the bald eagle. "
    "sent20: The dog is cold. "
    "sent21: The dog likes the cow. "
    "sent22: The dog eats the bald eagle. "
    "sent23: The dog eats the cow. "
    "sent24: The bald eagle likes the dog. "
    "sent25: The bald eagle likes the cow. "
    "sent26: The cow sees the bald eagle. "
    "sent27: The cow sees the dog.";

// Four-person attribute theory for the abduction golden test.
inline const char* kPeopleAbductionContext =
    "triple1: Anne is white. "
    "triple2: Charlie is young. "
    "triple3: Dave is round. "
    "triple4: Erin is quiet. "
    "rule1: If someone is rough and young then they are blue. "
    "rule2: Rough, white people are smart. "
    "rule3: All smart people are rough. "
    "rule4: All smart people are white. "
    "rule5: If someone is young then they are smart. "
    "rule6: All smart people are rough.";

// Minimal Charlie theory: smart -> quiet -> young -> (+round) kind.
inline const char* kCharlieContext =
    "fact5: Charlie is smart. "
    "fact16: Charlie is round. "
    "rule11: If someone is young and round then they are kind. "
    "rule12: All quiet people are young. "
    "rule18: All smart people are quiet.";

inline const char* kCharlieProofPercent =
    "# rule18%conc1 & fact5 # rule12%conc2 # rule11%conc3 fact16 ; with conc1: Charlie is "
    "quiet. ; conc2: Charlie is young. ; conc3: Charlie is kind.";

// -- small literal builders

inline Literal attr(const std::string& name, const std::string& a, bool article = false,
                    bool neg = false) {
    return Literal{Atom::attribute(Term::entity(name, article), a), neg};
}

inline Literal rel(const std::string& verb, const std::string& s, const std::string& o,
                   bool neg = false) {
    return Literal{Atom::relation(verb, Term::entity(s, true), Term::entity(o, true)), neg};
}

inline Theory animals20() {
    return parse_context(kAnimalContext20, SemanticsMode::Owa, animals_profile());
}
inline Theory animals27(SemanticsMode mode = SemanticsMode::Cwa) {
    return parse_context(kAnimalContext27, mode, animals_profile());
}
inline Theory people_abduction() {
    return parse_context(kPeopleAbductionContext, SemanticsMode::Owa, people_profile());
}
inline Theory charlie() {
    return parse_context(kCharlieContext, SemanticsMode::Cwa, people_profile());
}

} // namespace fixtures

#endif
