#pragma once

#include "concord/contingency.hpp"
#include "concord/error.hpp"
#include "concord/indices.hpp"
#include "concord/int128.hpp"
#include "concord/labels.hpp"
#include "concord/model.hpp"
#include "concord/montecarlo.hpp"
#include "concord/oracle.hpp"
#include "concord/rng.hpp"
#include "concord/summation.hpp"
