#ifndef LCFRS_LCFRS_HPP
#define LCFRS_LCFRS_HPP

#include "binarize.hpp"
#include "composition.hpp"
#include "config.hpp"
#include "error.hpp"
#include "eval.hpp"
#include "grammar.hpp"
#include "grammar_io.hpp"
#include "induce.hpp"
#include "inventory.hpp"
#include "lexicalize.hpp"
#include "parallel.hpp"
#include "parser.hpp"
#include "pipeline.hpp"
#include "supertagger.hpp"
#include "symbols.hpp"
#include "tree.hpp"
#include "treebank.hpp"
#include "unlexicalize.hpp"

#endif  // LCFRS_LCFRS_HPP
