#pragma once

#include "womsearch/benefit.hpp"
#include "womsearch/dynamics.hpp"
#include "womsearch/equilibrium.hpp"
#include "womsearch/links.hpp"
#include "womsearch/market.hpp"
#include "womsearch/pricing.hpp"
#include "womsearch/scan.hpp"
#include "womsearch/shares.hpp"
#include "womsearch/simulator.hpp"
