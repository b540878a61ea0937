// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "frobevo/dataset.hpp"
#include "frobevo/errors.hpp"
#include "frobevo/evolve.hpp"
#include "frobevo/expr.hpp"
#include "frobevo/grammar.hpp"
#include "frobevo/mapper.hpp"
#include "frobevo/oracle.hpp"
#include "frobevo/random.hpp"
#include "frobevo/rational.hpp"
#include "frobevo/util.hpp"
#include "frobevo/verify.hpp"
#include "frobevo/version.hpp"
