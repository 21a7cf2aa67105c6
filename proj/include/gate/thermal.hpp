#pragma once

#include "gate/thermal/colorize.hpp"
#include "gate/thermal/io.hpp"
#include "gate/thermal/mosaic.hpp"
#include "gate/thermal/report.hpp"
#include "gate/thermal/stats.hpp"
