#pragma once

#include "gate/acquisition/clock.hpp"
#include "gate/acquisition/lifecycle.hpp"
#include "gate/acquisition/manager.hpp"
#include "gate/acquisition/sensor.hpp"
#include "gate/acquisition/server.hpp"
#include "gate/acquisition/service.hpp"
#include "gate/acquisition/simulate.hpp"
