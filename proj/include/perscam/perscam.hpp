// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "perscam/camera.hpp"
#include "perscam/error.hpp"
#include "perscam/metrics.hpp"
#include "perscam/pemap.hpp"
#include "perscam/persrot.hpp"
#include "perscam/pipeline.hpp"
#include "perscam/png_io.hpp"
#include "perscam/pose.hpp"
#include "perscam/raster.hpp"
#include "perscam/scene.hpp"
#include "perscam/serialize.hpp"
