// SPDX-License-Identifier: Apache-2.0
//
// Umbrella header.

#ifndef EBLOCH_EBLOCH_HPP
#define EBLOCH_EBLOCH_HPP

#include "ebloch/bloch.hpp"
#include "ebloch/core.hpp"
#include "ebloch/dilog.hpp"
#include "ebloch/divisor.hpp"
#include "ebloch/elliptic_function.hpp"
#include "ebloch/function_ops.hpp"
#include "ebloch/mobius.hpp"
#include "ebloch/reduction.hpp"
#include "ebloch/rootfind.hpp"
#include "ebloch/theta.hpp"
#include "ebloch/torus.hpp"

#endif
