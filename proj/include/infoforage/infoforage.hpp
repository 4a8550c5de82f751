#pragma once

#include "infoforage/errors.hpp"
#include "infoforage/foraging.hpp"
#include "infoforage/lexical.hpp"
#include "infoforage/patches.hpp"
#include "infoforage/simulation.hpp"
#include "infoforage/text.hpp"
#include "infoforage/trend.hpp"
