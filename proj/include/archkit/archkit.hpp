#pragma once

#include "archkit/cutsets.hpp"
#include "archkit/default_profiles.hpp"
#include "archkit/diagnostics.hpp"
#include "archkit/fha.hpp"
#include "archkit/fpm.hpp"
#include "archkit/lexer.hpp"
#include "archkit/model.hpp"
#include "archkit/parser.hpp"
#include "archkit/profile.hpp"
#include "archkit/project.hpp"
#include "archkit/report.hpp"
#include "archkit/requirements.hpp"
#include "archkit/rule_spec.hpp"
#include "archkit/rules.hpp"
#include "archkit/safety.hpp"
#include "archkit/serialize.hpp"
#include "archkit/trace.hpp"
