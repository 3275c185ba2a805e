// Copyright (c) 2026 The chansim authors
// SPDX-License-Identifier: Apache-2.0

#ifndef CHANSIM_CHANSIM_HPP
#define CHANSIM_CHANSIM_HPP

#include "chansim/baselines.hpp"
#include "chansim/bessel.hpp"
#include "chansim/cdl.hpp"
#include "chansim/dataset.hpp"
#include "chansim/diagnostics.hpp"
#include "chansim/errors.hpp"
#include "chansim/io.hpp"
#include "chansim/parallel.hpp"
#include "chansim/profiles.hpp"
#include "chansim/rng.hpp"
#include "chansim/stochastics.hpp"
#include "chansim/tdl.hpp"

#endif  // CHANSIM_CHANSIM_HPP
