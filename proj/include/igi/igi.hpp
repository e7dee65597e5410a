#pragma once

#include "igi/value.hpp"
#include "igi/primitive_set.hpp"
#include "igi/tree.hpp"
#include "igi/generate.hpp"
#include "igi/interpreter.hpp"
#include "igi/fitness.hpp"
#include "igi/patch.hpp"
#include "igi/run.hpp"
#include "igi/igi_search.hpp"
#include "igi/baselines.hpp"
#include "igi/bench.hpp"
#include "igi/task_io.hpp"
#include "igi/harness.hpp"
