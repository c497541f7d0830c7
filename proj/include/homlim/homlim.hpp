#pragma once

#include "homlim/spec.hpp"
#include "homlim/cost.hpp"
#include "homlim/optimizer.hpp"
#include "homlim/model.hpp"
#include "homlim/scaling.hpp"
#include "homlim/units.hpp"
#include "homlim/presets.hpp"
#include "homlim/sweep.hpp"
#include "homlim/io.hpp"
