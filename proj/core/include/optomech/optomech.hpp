#pragma once

#include "optomech/dynamics.hpp"
#include "optomech/errors.hpp"
#include "optomech/figures.hpp"
#include "optomech/linalg.hpp"
#include "optomech/measures.hpp"
#include "optomech/model.hpp"
#include "optomech/oracle.hpp"
#include "optomech/sweep.hpp"
