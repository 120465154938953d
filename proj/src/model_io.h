#ifndef SESSIONLINK_SRC_MODEL_IO_H_
#define SESSIONLINK_SRC_MODEL_IO_H_

#include <Eigen/Dense>

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

// Text encoding for trained weights. Values are C99 hex floats so a file
// reproduces the model bit for bit.
namespace sessionlink::model_io {

void WriteHeader(std::ostream& out, std::string_view kind, int version);
void ExpectHeader(std::istream& in, std::string_view kind, int version);

void WriteMatrix(std::ostream& out, std::string_view name,
                 const Eigen::MatrixXd& m);
Eigen::MatrixXd ReadMatrix(std::istream& in, std::string_view name);
// A matrix record that must have exactly one row.
Eigen::RowVectorXd ReadRow(std::istream& in, std::string_view name);

void WriteValues(std::ostream& out, std::string_view name,
                 const std::vector<double>& values);
std::vector<double> ReadValues(std::istream& in, std::string_view name);

std::string HexDouble(double value);
double ParseHexDouble(const std::string& text);

}  // namespace sessionlink::model_io

#endif  // SESSIONLINK_SRC_MODEL_IO_H_
