#pragma once

#include "lowply/bench.hpp"
#include "lowply/domination.hpp"
#include "lowply/draw_path.hpp"
#include "lowply/drawing.hpp"
#include "lowply/errors.hpp"
#include "lowply/geometry.hpp"
#include "lowply/heavy_path.hpp"
#include "lowply/json_io.hpp"
#include "lowply/layout.hpp"
#include "lowply/ply.hpp"
#include "lowply/svg.hpp"
#include "lowply/tree.hpp"
