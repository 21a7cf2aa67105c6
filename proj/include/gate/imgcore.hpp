#pragma once

#include "gate/imgcore/canny.hpp"
#include "gate/imgcore/components.hpp"
#include "gate/imgcore/image.hpp"
#include "gate/imgcore/morphology.hpp"
#include "gate/imgcore/otsu.hpp"
#include "gate/imgcore/pnm.hpp"
