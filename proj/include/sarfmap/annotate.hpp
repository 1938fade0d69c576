#pragma once

#include "sarfmap/annotate/keywords.hpp"
#include "sarfmap/annotate/links.hpp"
#include "sarfmap/annotate/overlay.hpp"
#include "sarfmap/annotate/patterns.hpp"
