#pragma once

#include "solarpot/error.hpp"
#include "solarpot/geom.hpp"
#include "solarpot/horizon.hpp"
#include "solarpot/ingest.hpp"
#include "solarpot/packing.hpp"
#include "solarpot/pipeline.hpp"
#include "solarpot/pitch.hpp"
#include "solarpot/roofs.hpp"
#include "solarpot/shading.hpp"
#include "solarpot/solar.hpp"
