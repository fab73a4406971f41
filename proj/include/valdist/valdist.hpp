#pragma once

#include "valdist/errors.hpp"
#include "valdist/rational.hpp"
#include "valdist/upoly.hpp"
#include "valdist/mpoly.hpp"
#include "valdist/roots.hpp"
#include "valdist/det.hpp"
#include "valdist/exterior.hpp"
#include "valdist/curves.hpp"
#include "valdist/rng.hpp"
#include "valdist/parallel.hpp"
#include "valdist/quadrature.hpp"
#include "valdist/nevanlinna.hpp"
#include "valdist/corpus.hpp"
#include "valdist/crofton.hpp"
#include "valdist/jet_algebra.hpp"
#include "valdist/jet_ideals.hpp"
#include "valdist/experiments.hpp"
