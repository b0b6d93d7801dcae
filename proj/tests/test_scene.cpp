#include "gazegrasp/scene.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <string>

using namespace gazegrasp;

namespace {

const std::string kData = GAZEGRASP_DATA_DIR;

std::string object_json(const std::string& id, const std::string& cls, const std::string& extra = "") {
  return R"({"id": ")" + id + R"(", "class": ")" + cls +
         R"(", "center": [0, 0, 0.375], "half_extents": [0.4, 0.6, 0.375])" + extra + "}";
}

}  // namespace

TEST_CASE("object classes map to container kinds") {
  CHECK(classify_object(ObjectClass::Cup) == ContainerKind::SmallContainer);
  CHECK(classify_object(ObjectClass::Bowl) == ContainerKind::LargeContainer);
  CHECK(classify_object(ObjectClass::Apple) == ContainerKind::NonContainer);
  CHECK(classify_object(ObjectClass::Orange) == ContainerKind::NonContainer);
  CHECK(classify_object(ObjectClass::Table) == ContainerKind::Surface);

  for (auto cls : kAllObjectClasses) CHECK(object_class_from_string(to_string(cls)) == cls);
  for (auto kind : kAllContainerKinds) CHECK(container_kind_from_string(to_string(kind)) == kind);
  CHECK_THROWS_AS(object_class_from_string("Banana"), ParseError);
}

TEST_CASE("bundled dining scene loads") {
  const auto scene = load_scene_file(kData + "/dining_scene.json");
  CHECK(scene.objects.size() == 5);
  int tables = 0;
  for (const auto& o : scene.objects) tables += o.cls == ObjectClass::Table;
  CHECK(tables == 1);
  CHECK(scene.table().aabb.top() == doctest::Approx(scene.table_height));
  CHECK(scene.at("cup").contents == 0.8);
  CHECK(scene.at("bowl").contents == 0.0);
  CHECK_FALSE(scene.at("orange").contents.has_value());
  CHECK_THROWS_AS(scene.at("plate"), DomainError);

  const auto round = scene_from_json(scene_to_json(scene));
  REQUIRE(round.objects.size() == scene.objects.size());
  for (std::size_t i = 0; i < scene.objects.size(); ++i) {
    CHECK(round.objects[i].id == scene.objects[i].id);
    CHECK(round.objects[i].aabb.center == scene.objects[i].aabb.center);
    CHECK(round.objects[i].contents == scene.objects[i].contents);
  }
}

TEST_CASE("scene invariants") {
  const std::string table = object_json("table", "Table");
  const std::string cup = R"({"id": "cup", "class": "Cup", "center": [0, 0, 0.8], "half_extents": [0.04, 0.04, 0.05], "contents": 0.5})";

  CHECK_NOTHROW(load_scene(R"({"table_height": 0.75, "objects": [)" + table + "," + cup + "]}"));

  SUBCASE("duplicate id") {
    CHECK_THROWS_AS(load_scene(R"({"table_height": 0.75, "objects": [)" + table + "," + cup + "," + cup + "]}"),
                    ValidationError);
  }
  SUBCASE("empty object list lacks a table") {
    CHECK_THROWS_AS(load_scene(R"({"table_height": 0.75, "objects": []})"), ValidationError);
  }
  SUBCASE("non-positive half extent") {
    const std::string flat = R"({"id": "a", "class": "Apple", "center": [0, 0, 0.8], "half_extents": [0.04, 0, 0.04]})";
    CHECK_THROWS_AS(load_scene(R"({"table_height": 0.75, "objects": [)" + table + "," + flat + "]}"), ValidationError);
  }
  SUBCASE("contents only on containers") {
    const std::string apple = R"({"id": "a", "class": "Apple", "center": [0, 0, 0.8], "half_extents": [0.04, 0.04, 0.04], "contents": 0.2})";
    CHECK_THROWS_AS(load_scene(R"({"table_height": 0.75, "objects": [)" + table + "," + apple + "]}"), ValidationError);
    const std::string dry = R"({"id": "c", "class": "Cup", "center": [0, 0, 0.8], "half_extents": [0.04, 0.04, 0.05]})";
    CHECK_THROWS_AS(load_scene(R"({"table_height": 0.75, "objects": [)" + table + "," + dry + "]}"), ValidationError);
  }
  SUBCASE("table height must match the table top") {
    CHECK_THROWS_AS(load_scene(R"({"table_height": 0.7, "objects": [)" + table + "]}"), ValidationError);
  }
  SUBCASE("schema errors name the field") {
    try {
      load_scene(R"({"table_height": 0.75, "objects": [{"id": "t", "class": "Table", "center": [0, 0]}]})");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("center") != std::string::npos);
    }
    CHECK_THROWS_AS(load_scene("{not json"), ParseError);
    CHECK_THROWS_AS(load_scene(R"({"objects": []})"), ParseError);
  }
}
