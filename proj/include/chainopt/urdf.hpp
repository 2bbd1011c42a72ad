#pragma once

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include <charconv>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "chainopt/chain.hpp"
#include "chainopt/errors.hpp"

namespace chainopt {

struct UrdfDocument {
  std::string xml_text;
};

namespace detail {

inline std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string fmt_vec3(double x, double y, double z) {
  return fmt_double(x) + " " + fmt_double(y) + " " + fmt_double(z);
}

inline std::vector<double> parse_triplet(const std::string& s) {
  std::istringstream in(s);
  std::vector<double> out;
  double v;
  while (in >> v) out.push_back(v);
  if (out.size() != 3) throw ValidationError("expected 3 numbers in '" + s + "'");
  return out;
}

}  // namespace detail

/// Serializes a chain as URDF: one revolute joint per segment, each link a
/// cylinder of the chain radius along local z. The link inertial combines the
/// joint motor (point mass at the origin) with the link tube (at the
/// midpoint); the combined mass and center of mass keep both recoverable.
inline UrdfDocument export_urdf(const KinematicChain& chain,
                                const std::string& robot_name = "chain",
                                const std::string& provenance = "") {
  using detail::fmt_double;
  using detail::fmt_vec3;
  std::ostringstream xml;
  xml << "<?xml version=\"1.0\"?>\n";
  if (!provenance.empty()) xml << "<!-- " << provenance << " -->\n";
  xml << "<robot name=\"" << robot_name << "\">\n";
  xml << "  <link name=\"base_link\"/>\n";
  for (std::size_t i = 0; i < chain.dof(); ++i) {
    const ChainSegment& seg = chain.segments[i];
    const std::string parent = (i == 0) ? "base_link" : "link_" + std::to_string(i);
    const std::string child = "link_" + std::to_string(i + 1);
    const double parent_len = (i == 0) ? 0.0 : chain.segments[i - 1].length;

    xml << "  <joint name=\"joint_" << (i + 1) << "\" type=\"revolute\">\n";
    xml << "    <parent link=\"" << parent << "\"/>\n";
    xml << "    <child link=\"" << child << "\"/>\n";
    xml << "    <origin xyz=\"" << fmt_vec3(0.0, 0.0, parent_len) << "\" rpy=\"0 0 0\"/>\n";
    xml << "    <axis xyz=\"" << fmt_vec3(seg.axis.x(), seg.axis.y(), seg.axis.z()) << "\"/>\n";
    xml << "    <limit lower=\"" << fmt_double(chain.joint_limits[i][0]) << "\" upper=\""
        << fmt_double(chain.joint_limits[i][1]) << "\" effort=\"1000\" velocity=\"10\"/>\n";
    xml << "  </joint>\n";

    const double m_total = seg.motor_mass + seg.link_mass;
    const double com_z = m_total > 0.0 ? seg.link_mass * (seg.length / 2.0) / m_total : 0.0;
    // Solid cylinder about the link midpoint plus parallel-axis terms for the
    // motor point mass and the midpoint offset from the combined COM.
    const double r2 = chain.link_radius * chain.link_radius;
    const double l2 = seg.length * seg.length;
    const double mid_off = seg.length / 2.0 - com_z;
    const double ixx = seg.link_mass * (3.0 * r2 + l2) / 12.0 + seg.link_mass * mid_off * mid_off +
                       seg.motor_mass * com_z * com_z;
    const double izz = seg.link_mass * r2 / 2.0;

    xml << "  <link name=\"" << child << "\">\n";
    xml << "    <visual>\n";
    xml << "      <origin xyz=\"" << fmt_vec3(0.0, 0.0, seg.length / 2.0) << "\" rpy=\"0 0 0\"/>\n";
    xml << "      <geometry><cylinder radius=\"" << fmt_double(chain.link_radius)
        << "\" length=\"" << fmt_double(seg.length) << "\"/></geometry>\n";
    xml << "    </visual>\n";
    xml << "    <inertial>\n";
    xml << "      <origin xyz=\"" << fmt_vec3(0.0, 0.0, com_z) << "\" rpy=\"0 0 0\"/>\n";
    xml << "      <mass value=\"" << fmt_double(m_total) << "\"/>\n";
    xml << "      <inertia ixx=\"" << fmt_double(ixx) << "\" ixy=\"0\" ixz=\"0\" iyy=\""
        << fmt_double(ixx) << "\" iyz=\"0\" izz=\"" << fmt_double(izz) << "\"/>\n";
    xml << "    </inertial>\n";
    xml << "  </link>\n";
  }
  xml << "</robot>\n";
  return UrdfDocument{xml.str()};
}

/// Rebuilds a chain from a document produced by export_urdf. The motor/link
/// mass split is recovered from the combined inertial mass, its center of
/// mass and the cylinder length.
inline KinematicChain parse_urdf(const UrdfDocument& doc, double gravity = 9.81) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in(doc.xml_text);
  try {
    pt::read_xml(in, tree);
  } catch (const pt::xml_parser_error& e) {
    throw ValidationError(std::string("URDF is not well-formed XML: ") + e.what());
  }

  const auto robot = tree.get_child_optional("robot");
  if (!robot) throw ValidationError("URDF has no <robot> element");

  KinematicChain chain;
  chain.gravity = gravity;
  struct LinkInfo {
    double mass = 0.0;
    double com_z = 0.0;
    double length = 0.0;
    double radius = 0.0;
  };
  std::vector<LinkInfo> links;
  std::vector<std::array<double, 2>> limits;
  std::vector<Eigen::Vector3d> axes;

  for (const auto& [tag, node] : *robot) {
    if (tag == "joint") {
      if (node.get<std::string>("<xmlattr>.type") != "revolute") {
        throw ValidationError("unsupported joint type in URDF");
      }
      const auto axis = detail::parse_triplet(node.get<std::string>("axis.<xmlattr>.xyz"));
      axes.emplace_back(axis[0], axis[1], axis[2]);
      limits.push_back({node.get<double>("limit.<xmlattr>.lower"),
                        node.get<double>("limit.<xmlattr>.upper")});
    } else if (tag == "link") {
      const auto inertial = node.get_child_optional("inertial");
      if (!inertial) continue; // base_link
      LinkInfo info;
      info.mass = inertial->get<double>("mass.<xmlattr>.value");
      info.com_z = detail::parse_triplet(inertial->get<std::string>("origin.<xmlattr>.xyz"))[2];
      info.length = node.get<double>("visual.geometry.cylinder.<xmlattr>.length");
      info.radius = node.get<double>("visual.geometry.cylinder.<xmlattr>.radius");
      links.push_back(info);
    }
  }
  if (axes.size() != links.size()) {
    throw ValidationError("URDF joint/link count mismatch");
  }

  chain.joint_limits = limits;
  for (std::size_t i = 0; i < axes.size(); ++i) {
    ChainSegment seg;
    seg.axis = axes[i];
    seg.length = links[i].length;
    if (links[i].length > 0.0) {
      seg.link_mass = 2.0 * links[i].mass * links[i].com_z / links[i].length;
    } else {
      seg.link_mass = 0.0;
    }
    seg.motor_mass = links[i].mass - seg.link_mass;
    chain.segments.push_back(seg);
    chain.link_radius = links[i].radius;
  }
  return chain;
}

}  // namespace chainopt
