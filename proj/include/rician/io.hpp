#ifndef RICIAN_IO_HPP
#define RICIAN_IO_HPP

#include <iosfwd>
#include <string>

#include "rician/mcmc.hpp"
#include "rician/model.hpp"
#include "rician/predictive.hpp"
#include "rician/study.hpp"

namespace rician {

/// One positive number per line; '#' starts a comment, blank lines are
/// skipped. Throws ParseError carrying the line number for malformed or
/// nonpositive entries, and for input without observations.
Sample parse_sample(std::istream& in);
/// "-" reads standard input. Throws Error if the file cannot be opened.
Sample load_sample(const std::string& path);
void write_sample(std::ostream& out, const Sample& s);

/// Shortest text that reads back to the same double.
std::string format_double(double x);

/// Columns iteration,chain,eta,alpha.
void write_chain_csv(std::ostream& out, const Chain& c);
/// Inverse of write_chain_csv. Acceptance rates and config are not stored
/// in the file; chain indices must be 0..k-1.
Chain read_chain_csv(std::istream& in);

/// Columns index,y_new.
void write_predictive_csv(std::ostream& out, const PredictiveDraws& d);
/// Columns method,n,parameter,bias,mse,cp,failures; cp is empty when the
/// method has no interval.
void write_study_csv(std::ostream& out, const StudyTable& t);
/// Columns gamma_th,point,lo,hi.
void write_outage_csv(std::ostream& out, const OutageCurve& c);

}  // namespace rician

#endif
