#pragma once

#include "gate/session/manifest.hpp"
#include "gate/session/pyramid.hpp"
#include "gate/session/service.hpp"
#include "gate/session/store.hpp"
