#pragma once

// Umbrella header: the whole library.

#include "drmmm/analysis.hpp"
#include "drmmm/classical.hpp"
#include "drmmm/context.hpp"
#include "drmmm/errors.hpp"
#include "drmmm/hw/carry.hpp"
#include "drmmm/hw/compressor.hpp"
#include "drmmm/hw/datapath.hpp"
#include "drmmm/hw/encoding.hpp"
#include "drmmm/natural.hpp"
#include "drmmm/random.hpp"
#include "drmmm/trace.hpp"
#include "drmmm/variant.hpp"
