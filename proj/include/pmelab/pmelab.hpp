#pragma once

#include "pmelab/errors.hpp"
#include "pmelab/graph.hpp"
#include "pmelab/field.hpp"
#include "pmelab/operators.hpp"
#include "pmelab/solver.hpp"
#include "pmelab/cd_verifier.hpp"
#include "pmelab/estimates.hpp"
#include "pmelab/io.hpp"
#include "pmelab/svg.hpp"
#include "pmelab/report_json.hpp"
#include "pmelab/reproduce.hpp"
