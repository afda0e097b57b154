#pragma once

#include "splitlab/analysis/bounds.hpp"
#include "splitlab/analysis/diagnostics.hpp"
#include "splitlab/analysis/studies.hpp"
#include "splitlab/diagnostics.hpp"
#include "splitlab/error.hpp"
#include "splitlab/flows.hpp"
#include "splitlab/grid.hpp"
#include "splitlab/kpp.hpp"
#include "splitlab/model.hpp"
#include "splitlab/splitting.hpp"
