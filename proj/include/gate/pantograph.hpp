#pragma once

#include "gate/pantograph/detect.hpp"
#include "gate/pantograph/homography.hpp"
#include "gate/pantograph/kdtree.hpp"
#include "gate/pantograph/model_io.hpp"
#include "gate/pantograph/sift.hpp"
