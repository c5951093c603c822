#pragma once

#include "lexplain/config.hpp"
#include "lexplain/corpus.hpp"
#include "lexplain/cql.hpp"
#include "lexplain/error.hpp"
#include "lexplain/evaluate.hpp"
#include "lexplain/explain.hpp"
#include "lexplain/grammar.hpp"
#include "lexplain/sketches.hpp"
#include "lexplain/thesaurus.hpp"
#include "lexplain/version.hpp"
