// SPDX-FileCopyrightText: 2026 fr2la contributors
// SPDX-License-Identifier: MIT

// Umbrella header: the full simulator and analytics library.

#pragma once

#include "fr2la/channel.hpp"    // IWYU pragma: export
#include "fr2la/config.hpp"     // IWYU pragma: export
#include "fr2la/csv.hpp"        // IWYU pragma: export
#include "fr2la/fieldstats.hpp" // IWYU pragma: export
#include "fr2la/link_adapt.hpp" // IWYU pragma: export
#include "fr2la/mac.hpp"        // IWYU pragma: export
#include "fr2la/nr_tables.hpp"  // IWYU pragma: export
#include "fr2la/phy.hpp"        // IWYU pragma: export
#include "fr2la/rng.hpp"        // IWYU pragma: export
#include "fr2la/scenario.hpp"   // IWYU pragma: export
#include "fr2la/util.hpp"       // IWYU pragma: export
