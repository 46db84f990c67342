/// @file outlierkit.hpp
/// Umbrella header for the whole toolkit.

#pragma once

#include "outlierkit/config.hpp"
#include "outlierkit/core.hpp"
#include "outlierkit/data.hpp"
#include "outlierkit/ensemble.hpp"
#include "outlierkit/error.hpp"
#include "outlierkit/eval.hpp"
#include "outlierkit/histogram.hpp"
#include "outlierkit/index.hpp"
#include "outlierkit/neighbors.hpp"
#include "outlierkit/registry.hpp"
#include "outlierkit/transform.hpp"
