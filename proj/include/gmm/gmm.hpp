#pragma once

#include "gmm/clustering.hpp"
#include "gmm/data.hpp"
#include "gmm/dataset.hpp"
#include "gmm/diagnostics.hpp"
#include "gmm/engine.hpp"
#include "gmm/harness.hpp"
#include "gmm/lssvm.hpp"
#include "gmm/rng.hpp"
