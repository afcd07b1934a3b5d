#pragma once

#include "umean/calibration.hpp"
#include "umean/csv.hpp"
#include "umean/distributions.hpp"
#include "umean/estimation.hpp"
#include "umean/pipelines.hpp"
#include "umean/regression.hpp"
#include "umean/transform.hpp"
