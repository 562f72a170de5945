#pragma once

#include "ffcs/baseline.hpp"
#include "ffcs/errors.hpp"
#include "ffcs/experiments.hpp"
#include "ffcs/field.hpp"
#include "ffcs/lifting.hpp"
#include "ffcs/linalg.hpp"
#include "ffcs/noisy.hpp"
#include "ffcs/numeric.hpp"
#include "ffcs/rng.hpp"
#include "ffcs/rscode.hpp"
#include "ffcs/sensing.hpp"
#include "ffcs/tracking.hpp"
#include "ffcs/version.hpp"
