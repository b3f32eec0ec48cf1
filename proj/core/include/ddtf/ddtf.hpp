#pragma once

#include "ddtf/denoiser.hpp"
#include "ddtf/diagnostics.hpp"
#include "ddtf/error.hpp"
#include "ddtf/filterbank.hpp"
#include "ddtf/image.hpp"
#include "ddtf/learner.hpp"
#include "ddtf/linops.hpp"
#include "ddtf/transform.hpp"
