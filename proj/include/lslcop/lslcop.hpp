#pragma once

#include "lslcop/concordance.hpp"
#include "lslcop/copula.hpp"
#include "lslcop/diagonal.hpp"
#include "lslcop/error.hpp"
#include "lslcop/json_io.hpp"
#include "lslcop/oracle.hpp"
#include "lslcop/series.hpp"
#include "lslcop/star.hpp"
