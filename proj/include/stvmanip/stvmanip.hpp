#pragma once

#include "stvmanip/candidate_set.hpp"
#include "stvmanip/error.hpp"
#include "stvmanip/experiments.hpp"
#include "stvmanip/profile.hpp"
#include "stvmanip/profile_io.hpp"
#include "stvmanip/report.hpp"
#include "stvmanip/results_csv.hpp"
#include "stvmanip/rng.hpp"
#include "stvmanip/solver.hpp"
#include "stvmanip/stv.hpp"
#include "stvmanip/votegen.hpp"
