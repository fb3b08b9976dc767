#pragma once

#include "austere/errors.hpp"
#include "austere/linalg.hpp"
#include "austere/cpn_core.hpp"
#include "austere/immersion.hpp"
#include "austere/stenzel_metric.hpp"
#include "austere/slag_check.hpp"
#include "austere/austerity.hpp"
#include "austere/catalog.hpp"
#include "austere/expression.hpp"
#include "austere/config.hpp"
#include "austere/report.hpp"
#include "austere/run.hpp"
#include "austere/verification.hpp"
