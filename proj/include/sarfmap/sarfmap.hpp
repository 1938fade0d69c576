#pragma once

#include "sarfmap/annotate.hpp"
#include "sarfmap/block_layout.hpp"
#include "sarfmap/city_map.hpp"
#include "sarfmap/clustering.hpp"
#include "sarfmap/errors.hpp"
#include "sarfmap/feature_tree.hpp"
#include "sarfmap/graph_model.hpp"
#include "sarfmap/map_document.hpp"
#include "sarfmap/pipeline.hpp"
#include "sarfmap/street_layout.hpp"
#include "sarfmap/svg.hpp"
#include "sarfmap/synthetic.hpp"
