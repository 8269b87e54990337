#include "bbs/simplex.hpp"

namespace bbs::lp {

template class LpProblem<Rat>;
template class LpProblem<double>;
template struct detail::Tableau<Rat>;
template struct detail::Tableau<double>;

}  // namespace bbs::lp
