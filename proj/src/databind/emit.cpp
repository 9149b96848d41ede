#include <cmath>
#include <cstdint>

#include "exeos/ampl/render.hpp"
#include "exeos/databind/bind.hpp"
#include "json.hpp"

namespace exeos::databind {

ampl::DataSection to_data_section(const BoundData& data) {
  ampl::DataSection section;
  for (const auto& set : data.sets)
    section.set_values.emplace_back(set.name, set.members);
  for (const auto& param : data.params) {
    if (param.arity == 0) {
      section.param_values.emplace_back(param.name, param.scalar);
    } else if (param.arity == 1) {
      ampl::OneDValues values;
      values.entries = param.one_d;
      section.param_values.emplace_back(param.name, std::move(values));
    } else {
      section.param_values.emplace_back(param.name, param.two_d);
    }
  }
  return section;
}

BoundData from_data_section(const ampl::DataSection& section) {
  BoundData data;
  for (const auto& [name, members] : section.set_values)
    data.sets.push_back({name, members});
  for (const auto& [name, value] : section.param_values) {
    BoundParam param;
    param.name = name;
    if (const double* scalar = std::get_if<double>(&value)) {
      param.arity = 0;
      param.scalar = *scalar;
    } else if (const auto* one_d = std::get_if<ampl::OneDValues>(&value)) {
      param.arity = 1;
      param.one_d = one_d->entries;
    } else {
      param.arity = 2;
      param.two_d = std::get<ampl::TwoDTable>(value);
    }
    param.provenance = "data section";
    data.params.push_back(std::move(param));
  }
  return data;
}

std::string emit_ampl_data(const BoundData& data) {
  return ampl::render_data(to_data_section(data));
}

namespace {

using Json = nlohmann::ordered_json;

// Integral values are stored as integers so the document reads `10`, not
// `10.0`; either way they compare equal after read-back.
Json number(double v) {
  double integral = 0.0;
  if (std::modf(v, &integral) == 0.0 && integral >= -9.0e15 &&
      integral <= 9.0e15)
    return Json(static_cast<std::int64_t>(integral));
  return Json(v);
}

}  // namespace

std::string emit_generic_data(const BoundData& data) {
  Json doc;
  doc["sets"] = Json::object();
  for (const auto& set : data.sets) {
    Json members = Json::array();
    for (const auto& m : set.members) members.push_back(m);
    doc["sets"][set.name] = std::move(members);
  }
  doc["params"] = Json::object();
  for (const auto& param : data.params) {
    if (param.arity == 0) {
      doc["params"][param.name] = number(param.scalar);
    } else if (param.arity == 1) {
      Json map = Json::object();
      for (const auto& [key, value] : param.one_d) map[key] = number(value);
      doc["params"][param.name] = std::move(map);
    } else {
      Json rows = Json::object();
      for (std::size_t r = 0; r < param.two_d.row_keys.size(); ++r) {
        Json cols = Json::object();
        for (std::size_t c = 0; c < param.two_d.col_keys.size(); ++c)
          cols[param.two_d.col_keys[c]] = number(param.two_d.at(r, c));
        rows[param.two_d.row_keys[r]] = std::move(cols);
      }
      doc["params"][param.name] = std::move(rows);
    }
  }
  return doc.dump(2) + "\n";
}

Result<BoundData, IngestError> read_generic_data(const std::string& text) {
  auto fail = [](std::string msg) {
    return IngestError{IngestErrorKind::BadDocument, "<generic-data>", 0,
                       std::move(msg)};
  };
  Json doc = Json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) return fail("not valid JSON");
  if (!doc.is_object() || !doc.contains("sets") || !doc.contains("params") ||
      !doc["sets"].is_object() || !doc["params"].is_object())
    return fail("expected an object with `sets` and `params` maps");

  BoundData data;
  for (const auto& [name, members] : doc["sets"].items()) {
    if (!members.is_array()) return fail("set `" + name + "` is not a list");
    BoundSet set;
    set.name = name;
    for (const auto& m : members) {
      if (!m.is_string())
        return fail("set `" + name + "` has a non-string member");
      set.members.push_back(m.get<std::string>());
    }
    data.sets.push_back(std::move(set));
  }

  for (const auto& [name, value] : doc["params"].items()) {
    BoundParam param;
    param.name = name;
    param.provenance = "generic data document";
    if (value.is_number()) {
      param.arity = 0;
      param.scalar = value.get<double>();
    } else if (value.is_object()) {
      bool nested = !value.empty() && value.begin()->is_object();
      if (!nested) {
        param.arity = 1;
        for (const auto& [key, cell] : value.items()) {
          if (!cell.is_number())
            return fail("parameter `" + name + "` key `" + key +
                        "` is not a number");
          param.one_d.emplace_back(key, cell.get<double>());
        }
      } else {
        param.arity = 2;
        for (const auto& [row, cols] : value.items()) {
          if (!cols.is_object())
            return fail("parameter `" + name + "` row `" + row +
                        "` is not a map");
          param.two_d.row_keys.push_back(row);
          if (param.two_d.col_keys.empty())
            for (const auto& [col, _] : cols.items())
              param.two_d.col_keys.push_back(col);
          if (cols.size() != param.two_d.col_keys.size())
            return fail("parameter `" + name + "` rows have uneven columns");
          std::size_t c = 0;
          for (const auto& [col, cell] : cols.items()) {
            if (col != param.two_d.col_keys[c])
              return fail("parameter `" + name + "` rows have uneven columns");
            if (!cell.is_number())
              return fail("parameter `" + name + "` cell (" + row + ", " +
                          col + ") is not a number");
            param.two_d.values.push_back(cell.get<double>());
            ++c;
          }
        }
      }
    } else {
      return fail("parameter `" + name + "` is neither number nor map");
    }
    data.params.push_back(std::move(param));
  }

  return data;
}

}  // namespace exeos::databind
