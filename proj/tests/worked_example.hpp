#ifndef LCFRS_TEST_WORKED_EXAMPLE_HPP
#define LCFRS_TEST_WORKED_EXAMPLE_HPP

#include <map>
#include <string>

#include "test_util.hpp"

// The running example: "A hearing is scheduled on the issue today".
namespace worked {

using namespace lcfrs;
using testutil::chain;
using testutil::D;
using testutil::R;

// scheduled(4) today(8) with the NP over NP-LOC over NN chain
inline Derivation chain_expanded() {
  return D(R("VP|<>_1", "VBN_1 NP_1", "x1^1 x2^1"),
           {D(R("VBN_1", "", "4")),
            D(R("NP_1", "NP-LOC_1", "x1^1"), {D(R("NP-LOC_1", "NN_1", "x1^1"), {D(R("NN_1", "", "8"))})})});
}

inline Derivation chain_collapsed() {
  return D(R("VP|<>_1", "VBN_1 NP+NP-LOC+NN_1", "x1^1 x2^1"),
           {D(R("VBN_1", "", "4")), D(R("NP+NP-LOC+NN_1", "", "8"))});
}

// A(1) hearing(2) ... on(5) the(6) issue(7)
inline Derivation np_induced() {
  return D(R("NP_2", "NP_1 PP_1", "x1^1, x2^1"),
           {D(R("NP_1", "DT_1 NN_1", "x1^1 x2^1"), {D(R("DT_1", "", "1")), D(R("NN_1", "", "2"))}),
            D(R("PP_1", "IN_1 NP_1", "x1^1 x2^1"),
              {D(R("IN_1", "", "5")),
               D(R("NP_1", "DT_1 NN_1", "x1^1 x2^1"), {D(R("DT_1", "", "6")), D(R("NN_1", "", "7"))})})});
}

inline Derivation np_fused() {
  return D(R("NP_2", "NP_1 PP_1", "x1^1, x2^1"),
           {D(R("NP_1", "", "1 2")), D(R("PP_1", "NP_1", "5 x1^1"), {D(R("NP_1", "", "6 7"))})});
}

inline Derivation np_propagated() {
  return D(R("NP_2", "NP_1 PP_1^+", "x1^1, 5 x2^1"),
           {D(R("NP_1", "", "1 2")), D(R("PP_1^+", "NP_1^+", "6 x1^1", "swapped"), {D(R("NP_1^+", "", "7"))})});
}

inline Derivation np_split() {
  return D(R("NP_2", "NP_1 PP_1^+", "x1^1, 5 x2^1"),
           {D(R("NP_1", "NP_1^R", "1 x1^1"), {D(R("NP_1^R", "", "2"))}),
            D(R("PP_1^+", "NP_1^+", "6 x1^1", "swapped"), {D(R("NP_1^+", "", "7"))})});
}

inline PosLookup np_pos() {
  return [](int p) -> std::vector<LabelId> {
    static const std::map<int, std::string> tags{{1, "DT"}, {2, "NN"}, {4, "VBN"}, {5, "IN"}, {6, "DT"}, {7, "NN"}, {8, "NN"}};
    return chain(tags.at(p));
  };
}

inline const char* kExample =
    "(ROOT (VP (VBZ 3=is) (VP (VBN 4=scheduled) (NP (NP (DT 1=A) (NN 2=hearing)) (PP (IN 5=on) (NP (DT 6=the) "
    "(NN 7=issue)))) (NP (NN 8=today)))))";

}  // namespace worked

#endif  // LCFRS_TEST_WORKED_EXAMPLE_HPP
