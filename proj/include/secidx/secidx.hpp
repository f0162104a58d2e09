#pragma once

#include "secidx/analysis.hpp"
#include "secidx/codes.hpp"
#include "secidx/errors.hpp"
#include "secidx/gf.hpp"
#include "secidx/model.hpp"
#include "secidx/oracle.hpp"
