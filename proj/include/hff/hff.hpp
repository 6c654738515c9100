#pragma once

// Umbrella header for the high-frequency-first image fitting library.

#include "hff/adam.hpp"
#include "hff/checkpoint.hpp"
#include "hff/harness.hpp"
#include "hff/image.hpp"
#include "hff/image_io.hpp"
#include "hff/mask.hpp"
#include "hff/metrics.hpp"
#include "hff/mlp.hpp"
#include "hff/trainer.hpp"
