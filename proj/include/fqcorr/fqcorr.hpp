#pragma once

// Umbrella header: correlations of arithmetic functions over F_q[T].

#include "fqcorr/bigint.hpp"
#include "fqcorr/experiments.hpp"
#include "fqcorr/factor.hpp"
#include "fqcorr/hyperoctahedral.hpp"
#include "fqcorr/local_density.hpp"
#include "fqcorr/oracles.hpp"
#include "fqcorr/output.hpp"
#include "fqcorr/poly.hpp"
#include "fqcorr/poly_parse.hpp"
#include "fqcorr/prime_field.hpp"
#include "fqcorr/rng.hpp"
#include "fqcorr/series.hpp"
#include "fqcorr/sft.hpp"
#include "fqcorr/shifts.hpp"
