#pragma once

#include "ust/classify.hpp"
#include "ust/entropy.hpp"
#include "ust/error.hpp"
#include "ust/features.hpp"
#include "ust/labels.hpp"
#include "ust/pipeline.hpp"
#include "ust/series.hpp"
#include "ust/shapelet.hpp"
#include "ust/uncertain.hpp"
