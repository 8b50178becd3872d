/** Umbrella header: the whole library in one include. */

#ifndef QUIVERTORIC_QUIVERTORIC_HPP
#define QUIVERTORIC_QUIVERTORIC_HPP

#include "classify.hpp"
#include "gale.hpp"
#include "int_matrix.hpp"
#include "numeric.hpp"
#include "polytope.hpp"
#include "quiver.hpp"
#include "structure.hpp"

#endif  // QUIVERTORIC_QUIVERTORIC_HPP
