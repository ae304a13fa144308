#pragma once

#include "mkgauss/asymptotics.hpp"
#include "mkgauss/case_study.hpp"
#include "mkgauss/errors.hpp"
#include "mkgauss/experiment.hpp"
#include "mkgauss/gaussian_criteria.hpp"
#include "mkgauss/mann_kendall.hpp"
#include "mkgauss/process_models.hpp"
#include "mkgauss/random.hpp"
#include "mkgauss/report.hpp"
#include "mkgauss/shapiro_wilk.hpp"
#include "mkgauss/spec_parse.hpp"
