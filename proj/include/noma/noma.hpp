#pragma once

#include "noma/channel.hpp"
#include "noma/code.hpp"
#include "noma/common.hpp"
#include "noma/gf2.hpp"
#include "noma/lcsosd.hpp"
#include "noma/mi.hpp"
#include "noma/ml.hpp"
#include "noma/osd.hpp"
#include "noma/perm.hpp"
#include "noma/receivers.hpp"
#include "noma/rng.hpp"
#include "noma/sim.hpp"
