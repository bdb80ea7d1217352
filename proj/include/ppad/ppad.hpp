#pragma once

// Umbrella header for the PPAD toolkit: structure-preserving anomaly
// synthesis and position-guided prompt learning at desk scale.

#include "ppad/dataset.hpp"
#include "ppad/distance.hpp"
#include "ppad/encoder.hpp"
#include "ppad/errors.hpp"
#include "ppad/gamma.hpp"
#include "ppad/geometry.hpp"
#include "ppad/image.hpp"
#include "ppad/image_io.hpp"
#include "ppad/inference.hpp"
#include "ppad/maskgen.hpp"
#include "ppad/metrics.hpp"
#include "ppad/perlin.hpp"
#include "ppad/prompts.hpp"
#include "ppad/raster.hpp"
#include "ppad/rng.hpp"
#include "ppad/synth.hpp"
#include "ppad/tensor.hpp"
#include "ppad/trainer.hpp"
