#ifndef FTC_FTC_HPP
#define FTC_FTC_HPP

#include "ftc/errors.hpp"
#include "ftc/graph.hpp"
#include "ftc/graph_io.hpp"
#include "ftc/generators.hpp"
#include "ftc/matching.hpp"
#include "ftc/two_factor.hpp"
#include "ftc/random.hpp"
#include "ftc/rational.hpp"
#include "ftc/simplex.hpp"
#include "ftc/recurrence.hpp"
#include "ftc/sparse_decomp.hpp"
#include "ftc/total_set.hpp"
#include "ftc/sampler.hpp"
#include "ftc/assembler.hpp"

#endif  // FTC_FTC_HPP
