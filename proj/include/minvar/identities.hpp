#pragma once

#include "minvar/identities/harmonicity.hpp"
#include "minvar/identities/helicoid_algebra.hpp"
#include "minvar/identities/lemma.hpp"
#include "minvar/identities/proof_terms.hpp"
