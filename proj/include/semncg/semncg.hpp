#pragma once

#include "semncg/types.hpp"
#include "semncg/tokenize.hpp"
#include "semncg/io.hpp"
#include "semncg/similarity.hpp"
#include "semncg/ranking.hpp"
#include "semncg/redundancy.hpp"
#include "semncg/multi_reference.hpp"
#include "semncg/final_score.hpp"
#include "semncg/kendall.hpp"
#include "semncg/meta_eval.hpp"
#include "semncg/ingest.hpp"
