#pragma once

#include "minvar/derivkit/finite_diff.hpp"
#include "minvar/derivkit/jet.hpp"
#include "minvar/errors.hpp"
#include "minvar/families/build.hpp"
#include "minvar/families/family_spec.hpp"
#include "minvar/families/graph.hpp"
#include "minvar/geomcore/laplace_beltrami.hpp"
#include "minvar/geomcore/metric.hpp"
#include "minvar/harness.hpp"
#include "minvar/identities.hpp"
#include "minvar/io.hpp"
#include "minvar/rng.hpp"
