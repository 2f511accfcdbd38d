#pragma once

#include "dataset.hpp"
#include "export.hpp"
#include "frame_geometry.hpp"
#include "group_bridge.hpp"
#include "iwasawa.hpp"
#include "loop_algebra.hpp"
#include "multiprecision.hpp"
#include "parallel.hpp"
#include "pipeline.hpp"
#include "potential.hpp"
#include "spec_file.hpp"
#include "surface_builder.hpp"
#include "verification.hpp"
#include "verify.hpp"
