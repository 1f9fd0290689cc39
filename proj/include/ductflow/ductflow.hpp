#ifndef DUCTFLOW_DUCTFLOW_HPP
#define DUCTFLOW_DUCTFLOW_HPP

#include "ductflow/closed_forms.hpp"
#include "ductflow/coupling.hpp"
#include "ductflow/errors.hpp"
#include "ductflow/gas.hpp"
#include "ductflow/junction.hpp"
#include "ductflow/lax_curves.hpp"
#include "ductflow/series_fit.hpp"

#endif
