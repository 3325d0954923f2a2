#pragma once

// Umbrella header: exact arithmetic over Q(i), local algebras with a
// distinguished generating hyperplane, their invariant multilinear forms and
// hypersurface equations, the induced additive group actions, and canonical
// forms for the degree-2 case.

#include "addax/action.hpp"
#include "addax/algebra.hpp"
#include "addax/catalog.hpp"
#include "addax/classify.hpp"
#include "addax/cli.hpp"
#include "addax/io.hpp"
#include "addax/matrix.hpp"
#include "addax/multilinear.hpp"
#include "addax/polynomial.hpp"
#include "addax/scalar.hpp"
