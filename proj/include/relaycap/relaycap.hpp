#pragma once

#include "relaycap/bounds.hpp"
#include "relaycap/common.hpp"
#include "relaycap/dpp.hpp"
#include "relaycap/fc.hpp"
#include "relaycap/fixed_state.hpp"
#include "relaycap/mmse.hpp"
#include "relaycap/model.hpp"
#include "relaycap/montecarlo.hpp"
#include "relaycap/opt.hpp"
#include "relaycap/qci.hpp"
#include "relaycap/quadrature.hpp"
#include "relaycap/rng.hpp"
#include "relaycap/sweep.hpp"
#include "relaycap/tci.hpp"
